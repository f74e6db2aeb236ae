//! The ten acceptance criteria, each checked at exact tolerance.
//!
//! Every criterion prints one PASS/FAIL line. Two criteria cannot hold as
//! literally stated; they are expected to fail and each has a companion
//! check of the corrected statement that must pass.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use singfol_core::chase::{
    beilinson_contradiction, chase_ideal, en_complex_pfaff, en_complex_tangent, TangentData, IDEAL,
};
use singfol_core::chow::{
    porteous_singular_degree, pullback_degree, singular_degree_formula, tangent_degeneracy_degree,
    SplitBundle,
};
use singfol_core::cohomology::{table, CohomologyTable, Dim, Row, VirtualSheaf, Window};
use singfol_core::criteria::{
    acm_check, beilinson_rank_bound, buchsbaum_numeric, evans_griffith, horrocks, kpr, regularity,
    Decision, Witness,
};
use singfol_core::forms::{
    coefficient_ideal, contract, distribution_degree_of_form, parse_form, parse_ideal,
    volume_contract_chain, wedge, HomogeneousPoly, PolyVectorField,
};
use singfol_core::hilbert::{scheme_degree_dim, stabilized_profile, QPoly, DEFAULT_T_CAP};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn multisets(lo: i64, hi: i64, len: usize) -> Vec<Vec<i64>> {
    if len == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in (lo..=hi).rev() {
        for mut rest in multisets(lo, first, len - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn criterion_1_literal() -> Outcome {
    let mut bad = Vec::new();
    let mut total = 0;
    for n in 3..=8usize {
        for k in 1..n {
            let r = n - k;
            for d in 1..=6i64 {
                total += 1;
                let mut list = vec![d - 1];
                list.extend(std::iter::repeat_n(1, r - 1));
                let lhs = singular_degree_formula(n, r, &list).map_err(|e| e.to_string());
                let rhs = pullback_degree(n, k, d).unwrap();
                if lhs.as_ref() != Ok(&rhs) {
                    bad.push(format!("n={n} k={k} d={d}: {lhs:?} vs {rhs}"));
                }
            }
        }
    }
    ensure(bad.is_empty(), || {
        format!("{} of {total} cases differ, e.g. {}", bad.len(), bad[0])
    })?;
    Ok(format!("{total} cases"))
}

/// The degree read off the tangent sheaf `O(1-d) + O(1)^{r-1}`, whose first
/// Chern class is `r - d`.
fn criterion_1_corrected() -> Outcome {
    let mut total = 0;
    for n in 3..=8usize {
        for k in 1..n {
            let r = n - k;
            for d in 1..=6i64 {
                let mut tw = vec![1 - d];
                tw.extend(std::iter::repeat_n(1, r - 1));
                let f = SplitBundle::new(n, tw).unwrap();
                let lhs = tangent_degeneracy_degree(&f).unwrap();
                let mut oracle = BigInt::from(0);
                for j in 0..=k + 1 {
                    oracle += BigInt::from(d).pow(j as u32);
                }
                ensure(
                    lhs == oracle && pullback_degree(n, k, d).unwrap() == oracle,
                    || format!("n={n} k={k} d={d}: {lhs} vs {oracle}"),
                )?;
                total += 1;
            }
        }
    }
    Ok(format!("{total} cases"))
}

fn example_form() -> singfol_core::forms::PolyKForm {
    let w1 = parse_form("z0 dz1 - z1 dz0", Some(4)).unwrap();
    let w2 = parse_form("z2 dz3 - z3 dz2", Some(4)).unwrap();
    wedge(&w1, &w2).unwrap()
}

fn criterion_2() -> Outcome {
    let e = SplitBundle::uniform(3, -2, 2).unwrap();
    let a = porteous_singular_degree(3, &e).map_err(|e| e.to_string())?;
    let omega = example_form();
    let ideal = coefficient_ideal(&omega).map_err(|e| e.to_string())?;
    let (dim, deg) = scheme_degree_dim(&ideal, DEFAULT_T_CAP).map_err(|e| e.to_string())?;
    let d = distribution_degree_of_form(&omega, 3).map_err(|e| e.to_string())?;
    ensure(a == BigInt::from(2), || format!("porteous {a}"))?;
    ensure((dim, deg) == (1, 2), || {
        format!("hilbert (dim, deg) = ({dim}, {deg})")
    })?;
    ensure(d == 1, || format!("form degree {d}"))?;
    Ok("porteous 2, hilbert (1, 2), degree 1".into())
}

fn criterion_3() -> Outcome {
    let omega = example_form();
    ensure(
        contract(&omega, &PolyVectorField::radial(4))
            .unwrap()
            .is_zero(),
        || "i_R ω ≠ 0".into(),
    )?;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for case in 0..50 {
        let n = rng.gen_range(2..=4usize);
        let nf = rng.gen_range(1..n);
        let fields: Vec<PolyVectorField> = (0..nf)
            .map(|_| {
                let deg = rng.gen_range(0..=1u32);
                let vars: Vec<usize> = (0..=n).collect();
                let comps = (0..=n)
                    .map(|_| HomogeneousPoly::dense(n + 1, deg, &vars, || rng.gen_range(-3..=3)))
                    .collect();
                PolyVectorField::new(comps).unwrap()
            })
            .collect();
        let out = volume_contract_chain(n, &fields).map_err(|e| format!("case {case}: {e}"))?;
        ensure(
            contract(&out, &PolyVectorField::radial(n + 1))
                .unwrap()
                .is_zero(),
            || format!("case {case}: i_R ≠ 0"),
        )?;
        for (j, z) in fields.iter().enumerate() {
            ensure(contract(&out, z).unwrap().is_zero(), || {
                format!("case {case}: i_Z{j} ≠ 0")
            })?;
        }
    }
    Ok("example and 50 random chains".into())
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut checked = 0;
    for _ in 0..60 {
        let n = rng.gen_range(2..=7usize);
        let rank = rng.gen_range(1..=n);
        let tw: Vec<i64> = (0..rank).map(|_| rng.gen_range(-5..=5)).collect();
        let f = SplitBundle::new(n, tw).unwrap();
        let t = table(&VirtualSheaf::from_split(&f), -12, 12).unwrap();
        ensure(horrocks(&t).holds(), || {
            format!("horrocks rejects {f} on P^{n}")
        })?;
        if let Ok(v) = evans_griffith(&t, rank, n) {
            ensure(v.holds(), || format!("EG rejects {f} on P^{n}"))?;
        }
        if let Ok(v) = kpr(&t, rank, n) {
            ensure(v.holds(), || format!("KPR rejects {f} on P^{n}"))?;
        }
        checked += 1;
    }
    for n in 2..=7usize {
        let ni = n as i64;
        let om = horrocks(&table(&VirtualSheaf::cotangent(n), -12, 12).unwrap());
        ensure(
            om.fails()
                && om
                    .witnesses
                    .contains(&Witness::new(1, 0, Some(Dim::exact(1)))),
            || format!("Ω^1 on P^{n}: {om}"),
        )?;
        let tv = horrocks(&table(&VirtualSheaf::tangent(n), -12, 12).unwrap());
        ensure(
            tv.fails()
                && tv
                    .witnesses
                    .contains(&Witness::new(n - 1, -ni - 1, Some(Dim::exact(1)))),
            || format!("T on P^{n}: {tv}"),
        )?;
    }
    Ok(format!(
        "{checked} split bundles; Ω^1 and T rejected for n = 2..7"
    ))
}

fn criterion_5() -> Outcome {
    let mut count = 0;
    for r in 2..=4usize {
        for n in r + 1..=7 {
            for tw in multisets(-4, -1, r) {
                let f = SplitBundle::new(n, tw).unwrap();
                let out = chase_ideal(&en_complex_tangent(&f, n).unwrap(), n, -5, 5)
                    .map_err(|e| e.to_string())?;
                let iz = &out.tables[IDEAL];
                for p in 1..r {
                    let scan = iz.scan(p, None, None);
                    ensure(
                        scan.complete && scan.uncertain.is_empty() && scan.nonzero.is_empty(),
                        || format!("F = {f} on P^{n}: row {p} {:?}", scan),
                    )?;
                    ensure(iz.row(p).window.is_empty(), || {
                        format!("F = {f}: row {p} window {}", iz.row(p).window)
                    })?;
                }
                count += 1;
            }
        }
    }
    Ok(format!("{count} split tangent sheaves"))
}

fn criterion_6() -> Outcome {
    for n in 5..=7usize {
        let e = SplitBundle::uniform(n, -2, n - 2).unwrap();
        let c = e.c1();
        let out = chase_ideal(&en_complex_pfaff(&e, 2, n).unwrap(), n, -12, 12)
            .map_err(|e| e.to_string())?;
        let iz = &out.tables[IDEAL];
        for p in std::iter::once(1).chain(3..=n - 3) {
            ensure(iz.scan(p, None, None).vanishes(), || {
                format!("n={n}: row {p} does not vanish")
            })?;
        }
        let t0 = -c - n as i64 - 1;
        let scan = iz.scan(2, None, None);
        let omega2 = singfol_core::cohomology::bott_dim(n, 2, 0, 2);
        ensure(omega2 == 1, || format!("h^2(Ω^2) = {omega2}"))?;
        ensure(
            scan.complete
                && scan.uncertain.is_empty()
                && scan.nonzero == vec![(t0, Dim::exact(omega2))],
            || format!("n={n}: row 2 {scan:?}"),
        )?;
        ensure(buchsbaum_numeric(iz, n - 3).unwrap().holds(), || {
            format!("n={n}: not Buchsbaum")
        })?;
        ensure(acm_check(iz, n - 3).unwrap().fails(), || {
            format!("n={n}: ACM")
        })?;
    }
    Ok("n = 5, 6, 7".into())
}

/// `E = ⊕ O(a_i)` with `a_i = -d_i - 2`.
struct Gate {
    ds: Vec<i64>,
    verdict: singfol_core::criteria::Verdict,
}

fn gate_cases() -> Result<Vec<Gate>, String> {
    let n = 7;
    let mut out = Vec::new();
    for tw in multisets(-6, -2, n - 3) {
        let e = SplitBundle::new(n, tw.clone()).unwrap();
        let res = chase_ideal(&en_complex_pfaff(&e, 3, n).unwrap(), n, -25, 5)
            .map_err(|e| e.to_string())?;
        let iz = &res.tables[IDEAL];
        ensure(acm_check(iz, n - 4).unwrap().fails(), || {
            format!("{tw:?}: ACM")
        })?;
        let verdict = buchsbaum_numeric(iz, n - 4).unwrap();
        out.push(Gate {
            ds: tw.iter().map(|a| -a - 2).collect(),
            verdict,
        });
    }
    Ok(out)
}

fn gap_one(ds: &[i64]) -> bool {
    ds.iter().any(|a| ds.iter().any(|b| a - b == 1))
}

fn criterion_7_literal(cases: &[Gate]) -> Outcome {
    let mut bad = Vec::new();
    for g in cases {
        let hyp = !gap_one(&g.ds) && !g.ds.contains(&1);
        let ok = if hyp {
            g.verdict.holds()
        } else {
            !g.verdict.holds() && g.verdict.clause.as_deref() == Some("(ii)")
        };
        if !ok {
            bad.push(format!("d = {:?}: {}", g.ds, g.verdict));
        }
    }
    ensure(bad.is_empty(), || {
        format!("{} of {} cases, e.g. {}", bad.len(), cases.len(), bad[0])
    })?;
    Ok(format!("{} twist sets", cases.len()))
}

/// Some `d_i = 1` degrades through (ii) with a gap-1 witness pair; a gap
/// `|d_i - d_j| = 1` alone degrades through (i) with adjacent twists in one row.
fn criterion_7_corrected(cases: &[Gate]) -> Outcome {
    let (mut hyp, mut via_ii, mut via_i) = (0, 0, 0);
    for g in cases {
        let v = &g.verdict;
        if g.ds.contains(&1) {
            ensure(v.fails() && v.clause.as_deref() == Some("(ii)"), || {
                format!("d = {:?}: {v}", g.ds)
            })?;
            let [a, b] = [v.witnesses[0], v.witnesses[1]];
            ensure((a.q as i64 + a.twist) - (b.q as i64 + b.twist) == 1, || {
                format!("d = {:?}: {v}", g.ds)
            })?;
            via_ii += 1;
        } else if gap_one(&g.ds) {
            ensure(
                v.decision == Decision::Undetermined && v.clause.as_deref() == Some("(i)"),
                || format!("d = {:?}: {v}", g.ds),
            )?;
            let [a, b] = [v.witnesses[0], v.witnesses[1]];
            ensure(a.q == b.q && b.twist == a.twist + 1, || {
                format!("d = {:?}: {v}", g.ds)
            })?;
            via_i += 1;
        } else {
            ensure(v.holds(), || format!("d = {:?}: {v}", g.ds))?;
            hyp += 1;
        }
    }
    Ok(format!(
        "{hyp} hold, {via_ii} fail via (ii), {via_i} undetermined via (i)"
    ))
}

/// A table satisfying every lemma item with `h^{n-1}(F(-n-1)) = 1`.
fn odd_case_fixture(n: usize) -> CohomologyTable {
    let ni = n as i64;
    let mut rows = vec![
        Row {
            dims: Default::default(),
            window: Window::Empty,
            certified: true
        };
        n + 1
    ];
    rows[0].window = Window::at_least(-1);
    rows[n].window = Window::at_most(-ni - 2);
    let mut t = CohomologyTable::new(n, rows).unwrap();
    for s in -1..=6 {
        t.set(0, s, Dim::exact((s + 2) as u64));
    }
    for s in -ni - 10..=-ni - 2 {
        t.set(n, s, Dim::exact((-ni - 1 - s) as u64));
    }
    t.set(n - 1, -ni - 1, Dim::exact(1));
    t
}

fn criterion_8() -> Outcome {
    for n in 4..=6usize {
        let t = table(&VirtualSheaf::tangent(n), -15, 15).unwrap();
        let b = beilinson_rank_bound(&t, n).map_err(|e| e.to_string())?;
        ensure(b == n as u64, || format!("n={n}: bound {b}"))?;
    }
    for n in [5usize, 7, 9] {
        let fx = Arc::new(odd_case_fixture(n));
        let rc = beilinson_contradiction(&TangentData::Table(fx), None, 0, n)
            .map_err(|e| e.to_string())?;
        ensure(
            rc.contradiction && rc.bound == n as u64 && rc.budget == n as u64 - 1,
            || format!("n={n}: bound {} budget {}", rc.bound, rc.budget),
        )?;
    }
    Ok("T_{P^n} bound n for n = 4..6; contradiction for n = 5, 7, 9".into())
}

fn criterion_9() -> Outcome {
    let lines = stabilized_profile(
        &parse_ideal("z0*z2, z0*z3, z1*z2, z1*z3", Some(4)).unwrap(),
        DEFAULT_T_CAP,
    )
    .map_err(|e| e.to_string())?;
    let q = |c: &[i64]| {
        QPoly(
            c.iter()
                .map(|&x| BigRational::from_integer(x.into()))
                .collect(),
        )
    };
    ensure(
        lines.polynomial == q(&[2, 2]) && lines.stable_from <= 3,
        || format!("two lines: {} from {}", lines.polynomial, lines.stable_from),
    )?;
    let line = stabilized_profile(&parse_ideal("z0, z1", Some(4)).unwrap(), DEFAULT_T_CAP)
        .map_err(|e| e.to_string())?;
    ensure(line.polynomial == q(&[1, 1]), || {
        format!("line: {}", line.polynomial)
    })?;
    Ok(format!(
        "{} from t = {}; {}",
        lines.polynomial, lines.stable_from, line.polynomial
    ))
}

/// Globally generated summands of a tangent sheaf are `O` and `O(1)`:
/// `O(a)` with `a >= 2` has no nonzero map to `T_{P^n}`.
fn criterion_10() -> Outcome {
    let mut count = 0;
    for n in 3..=5usize {
        for r in 1..n {
            for tw in multisets(0, 1, r) {
                let d = r as i64 - tw.iter().sum::<i64>();
                if d < 0 {
                    continue;
                }
                let k = (n - r) as i64;
                let f = SplitBundle::new(n, tw).unwrap();
                let out = chase_ideal(&en_complex_tangent(&f, n).unwrap(), n, -5, 5)
                    .map_err(|e| e.to_string())?;
                let reg = regularity(&out.tables[IDEAL]).map_err(|e| e.to_string())?;
                ensure(reg <= d + k + 1, || {
                    format!("F = {f} on P^{n}: reg {reg} > {}", d + k + 1)
                })?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} globally generated split tangent sheaves"))
}

#[test]
fn acceptance() {
    let gates = gate_cases().expect("gate chases");
    let results: Vec<(&str, Outcome)> = vec![
        ("1", criterion_1_literal()),
        ("1 (tangent O(1-d)+O(1)^{r-1})", criterion_1_corrected()),
        ("2", criterion_2()),
        ("3", criterion_3()),
        ("4", criterion_4()),
        ("5", criterion_5()),
        ("6", criterion_6()),
        ("7", criterion_7_literal(&gates)),
        ("7 (gap degrades via (i))", criterion_7_corrected(&gates)),
        ("8", criterion_8()),
        ("9", criterion_9()),
        ("10", criterion_10()),
    ];
    let mut failed = BTreeSet::new();
    for (name, r) in &results {
        match r {
            Ok(msg) => println!("criterion {name}: PASS ({msg})"),
            Err(msg) => {
                println!("criterion {name}: FAIL ({msg})");
                failed.insert(*name);
            }
        }
    }
    let expected: BTreeSet<&str> = ["1", "7"].into_iter().collect();
    assert_eq!(failed, expected, "failures differ from the documented set");
}
