use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use singfol_core::chase::{
    chase, chase_ideal, en_complex_pfaff, en_complex_tangent, ExactTriple, Query, Term, IDEAL,
};
use singfol_core::chow::{
    singular_degree_formula, tangent_degeneracy_degree, ChowClass, SplitBundle,
};
use singfol_core::cohomology::{
    bott_dim, table, CohomologyTable, Dim, Row, SheafAtom, VirtualSheaf, Window,
};
use singfol_core::criteria::{acm_check, buchsbaum_numeric, regularity};
use singfol_core::forms::{
    coefficient_ideal, contract, minors_ideal, volume_contract_chain, wedge, HomogeneousPoly,
    PolyKForm, PolyVectorField,
};
use singfol_core::hilbert::{graded_piece_dim, hilbert_function, scheme_degree_dim};

fn binom(n: i64, k: i64) -> BigRational {
    // generalized binomial, valid for negative n
    let mut acc = BigRational::one();
    for i in 0..k {
        acc = acc * BigRational::from_integer((n - i).into())
            / BigRational::from_integer((i + 1).into());
    }
    acc
}

/// `χ(Ω^p(k))` from the Euler sequence `0 -> Ω^p -> Λ^p(O(-1)^{n+1}) -> Ω^{p-1} -> 0`.
fn euler_char_omega(n: usize, p: usize, k: i64) -> BigRational {
    let chi_line = |m: i64| binom(m + n as i64, n as i64);
    let mut chi = chi_line(k);
    for j in 1..=p {
        chi = binom(n as i64 + 1, j as i64) * chi_line(k - j as i64) - chi;
    }
    chi
}

fn random_poly(rng: &mut ChaCha8Rng, nvars: usize, degree: u32) -> HomogeneousPoly {
    let vars: Vec<usize> = (0..nvars).collect();
    HomogeneousPoly::dense(nvars, degree, &vars, || rng.gen_range(-3..=3))
}

fn random_one_form(rng: &mut ChaCha8Rng, nvars: usize, degree: u32) -> PolyKForm {
    let mut f = PolyKForm::zero(nvars, 1, degree);
    for i in 0..nvars {
        f = f
            .add(&PolyKForm::term(random_poly(rng, nvars, degree), &[i]).unwrap())
            .unwrap();
    }
    f
}

fn random_field(rng: &mut ChaCha8Rng, nvars: usize, degree: u32) -> PolyVectorField {
    PolyVectorField::new(
        (0..nvars)
            .map(|_| random_poly(rng, nvars, degree))
            .collect(),
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn chow_ring_laws(n in 1usize..7, a in prop::collection::vec(-5i64..6, 1..8),
                      b in prop::collection::vec(-5i64..6, 1..8), c in prop::collection::vec(-5i64..6, 1..8)) {
        let (x, y, z) = (ChowClass::from_i64(n, &a), ChowClass::from_i64(n, &b), ChowClass::from_i64(n, &c));
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        let mut unit = a.clone();
        unit[0] = 1;
        let u = ChowClass::from_i64(n, &unit);
        prop_assert_eq!(&u * &u.inverse().unwrap(), ChowClass::one(n));
    }

    #[test]
    fn degree_formula_matches_chern_quotient(n in 2usize..8, ds in prop::collection::vec(1i64..6, 1..6)) {
        prop_assume!(ds.len() < n);
        let f = SplitBundle::new(n, ds.iter().map(|d| -d).collect()).unwrap();
        prop_assert_eq!(singular_degree_formula(n, ds.len(), &ds).unwrap(), tangent_degeneracy_degree(&f).unwrap());
    }

    #[test]
    fn bott_euler_characteristic(n in 1usize..8, p in 0usize..8, k in -12i64..12) {
        prop_assume!(p <= n);
        let chi: i64 = (0..=n).map(|q| {
            let h = bott_dim(n, p, k, q) as i64;
            if q % 2 == 0 { h } else { -h }
        }).sum();
        prop_assert_eq!(BigRational::from_integer(chi.into()), euler_char_omega(n, p, k));
        // Serre duality
        for q in 0..=n {
            prop_assert_eq!(bott_dim(n, p, k, q), bott_dim(n, n - p, -k, n - q));
        }
    }

    #[test]
    fn windows_contain_support(n in 1usize..7, atoms in prop::collection::vec((0usize..7, -8i64..8, 1u64..3), 1..4)) {
        let atoms: Vec<(SheafAtom, u64)> = atoms.into_iter()
            .map(|(p, k, m)| (SheafAtom::omega(n, p.min(n), k).unwrap(), m)).collect();
        let s = VirtualSheaf::new(n, atoms).unwrap();
        for q in 0..=n {
            let w = s.support(q);
            for t in -30..30 {
                if !w.contains(t) {
                    prop_assert_eq!(s.dim(q, t), 0, "q={} t={} window {}", q, t, w);
                }
            }
        }
    }

    #[test]
    fn table_json_round_trip(n in 1usize..6, twists in prop::collection::vec(-4i64..4, 1..5), lo in -8i64..0) {
        let f = SplitBundle::new(n, twists).unwrap();
        let t = table(&VirtualSheaf::from_split(&f).direct_sum(&VirtualSheaf::cotangent(n)).unwrap(), lo, lo + 10).unwrap();
        let back = CohomologyTable::from_json(&t.to_json()).unwrap();
        prop_assert_eq!(back, t);
    }

    #[test]
    fn les_solver_contains_truth(n in 2usize..6, a in prop::collection::vec(-4i64..2, 1..4), lo in -6i64..0) {
        // 0 -> O(a) sum -> O(a) sum + Ω^1 -> Ω^1 -> 0: the bounds must contain h^q(Ω^1)
        let f = SplitBundle::new(n, a).unwrap();
        let left = VirtualSheaf::from_split(&f);
        let mid = left.direct_sum(&VirtualSheaf::cotangent(n)).unwrap();
        let tr = ExactTriple::new(Term::Known(left), Term::Known(mid), Term::unknown("C"), "split");
        let q: Vec<Query> = (0..=n).map(|q| Query { unknown: "C".into(), q, lo, hi: lo + 8 }).collect();
        let out = chase(n, &[tr], &q).unwrap();
        for ans in &out.answers {
            for &(t, d) in &ans.values {
                prop_assert!(d.contains(bott_dim(n, 1, t, ans.query.q)));
            }
        }
    }

    #[test]
    fn regularity_is_monotone(t0 in -6i64..6, extra in 1i64..5, q in 1usize..4) {
        let n = 3;
        let mut rows = vec![Row { dims: Default::default(), window: Window::Empty, certified: true }; n + 1];
        rows[n].window = Window::at_most(-4);
        let mut tab = CohomologyTable::new(n, rows).unwrap();
        for t in -10..=-4 {
            tab.set(n, t, Dim::exact(1));
        }
        tab.set(1, t0, Dim::exact(1));
        let before = regularity(&tab).unwrap();
        tab.set(q, t0 + extra, Dim::exact(2));
        prop_assert!(regularity(&tab).unwrap() >= before);
    }

    #[test]
    fn acm_tables_pass_gap_condition(n in 3usize..7, dim_z in 1usize..5, entries in prop::collection::vec((1usize..6, -6i64..6, 1u64..3), 0..5)) {
        prop_assume!(dim_z < n);
        let mut rows = vec![Row { dims: Default::default(), window: Window::Empty, certified: true }; n + 1];
        for r in rows.iter_mut() {
            r.dims.insert(0, Dim::ZERO);
        }
        let mut tab = CohomologyTable::new(n, rows).unwrap();
        for (p, t, v) in entries {
            if p < n {
                tab.set(p, t, Dim::exact(v));
            }
        }
        let acm = acm_check(&tab, dim_z).unwrap();
        let b = buchsbaum_numeric(&tab, dim_z).unwrap();
        if acm.holds() {
            prop_assert!(b.holds());
        }
        if b.clause.as_deref() == Some("(ii)") {
            prop_assert!(!acm.holds());
        }
    }
}

#[test]
fn wedge_and_contraction_identities() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let nv = rng.gen_range(3..=5);
        let (da, db, dx) = (
            rng.gen_range(0..=1),
            rng.gen_range(0..=1),
            rng.gen_range(0..=1),
        );
        let a = random_one_form(&mut rng, nv, da);
        let b = random_one_form(&mut rng, nv, db);
        let c = random_one_form(&mut rng, nv, 0);
        let ab = wedge(&a, &b).unwrap();
        let ba = wedge(&b, &a).unwrap();
        assert!(ab.add(&ba).unwrap().is_zero());
        assert!(wedge(&a, &a).unwrap().is_zero());
        // i_X(α ∧ β) = i_X α ∧ β - α ∧ i_X β for a 1-form α
        let x = random_field(&mut rng, nv, dx);
        let abc = wedge(&ab, &c).unwrap();
        let lhs = contract(&wedge(&a, &wedge(&b, &c).unwrap()).unwrap(), &x).unwrap();
        let ia = contract(&a, &x).unwrap();
        let ibc = contract(&wedge(&b, &c).unwrap(), &x).unwrap();
        let first = wedge(&ia, &wedge(&b, &c).unwrap()).unwrap();
        let second = wedge(&a, &ibc).unwrap();
        assert_eq!(lhs, first.sub(&second).unwrap());
        assert_eq!(contract(&abc, &x).unwrap(), lhs);
        // i_X i_X = 0
        assert!(contract(&contract(&abc, &x).unwrap(), &x)
            .unwrap()
            .is_zero());
    }
}

#[test]
fn chains_are_radial_and_have_expected_codimension() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..6 {
        // codimension-2 distributions on P^3 from one linear field: Sing has dim >= 0
        let z = random_field(&mut rng, 4, 1);
        let form = volume_contract_chain(3, &[z]).unwrap();
        assert!(contract(&form, &PolyVectorField::radial(4))
            .unwrap()
            .is_zero());
        let ideal = coefficient_ideal(&form).unwrap();
        let (dim, _) = scheme_degree_dim(&ideal, 30).unwrap();
        assert!(dim >= 0, "singular scheme of codimension > k + 1");
    }
}

#[test]
fn minors_and_coefficients_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..6 {
        let a = random_one_form(&mut rng, 4, 1);
        let b = random_one_form(&mut rng, 4, 1);
        let coeff = coefficient_ideal(&wedge(&a, &b).unwrap()).unwrap();
        let minors = minors_ideal(&[a, b]).unwrap();
        assert_eq!(
            hilbert_function(&coeff, 6),
            hilbert_function(&minors.ideal, 6)
        );
    }
}

#[test]
fn normal_forms_match_macaulay_matrix() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..10 {
        let nv = rng.gen_range(3..=4);
        let ng = rng.gen_range(1..=4);
        let degs: Vec<u32> = (0..ng).map(|_| rng.gen_range(1..=2)).collect();
        let gens: Vec<HomogeneousPoly> =
            degs.iter().map(|&d| random_poly(&mut rng, nv, d)).collect();
        let ideal = singfol_core::forms::GradedIdeal::new(nv, gens).unwrap();
        let hf = hilbert_function(&ideal, 5);
        for t in 0..=5u32 {
            let total = binom(nv as i64 - 1 + t as i64, nv as i64 - 1);
            let expect =
                total - BigRational::from_integer(BigInt::from(graded_piece_dim(&ideal, t)));
            assert_eq!(
                BigRational::from_integer(hf[t as usize].into()),
                expect,
                "t={t}"
            );
        }
    }
}

#[test]
fn chase_is_deterministic_and_replayable() {
    let f = SplitBundle::new(5, vec![-1, -2, -3]).unwrap();
    let trs = en_complex_tangent(&f, 5).unwrap();
    let a = chase_ideal(&trs, 5, -6, 6).unwrap();
    let b = chase_ideal(&trs, 5, -6, 6).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.to_json().to_string(), b.to_json().to_string());
    assert!(a.euler_checks > 0);
    for prov in a.provenance.values() {
        for p in prov.values() {
            assert_eq!(p.replay().unwrap(), p.value);
        }
    }
}

#[test]
fn resolution_ranks_alternate_to_one() {
    for n in 3..=7usize {
        for r in 1..n {
            let f = SplitBundle::uniform(n, -1, r).unwrap();
            let trs = en_complex_tangent(&f, n).unwrap();
            check_alternating_rank(&trs);
        }
        for r in 1..=3usize.min(n - 1) {
            let e = SplitBundle::uniform(n, -2, n - r).unwrap();
            check_alternating_rank(&en_complex_pfaff(&e, r, n).unwrap());
        }
    }
}

fn check_alternating_rank(trs: &[ExactTriple]) {
    // the known terms T_m, ..., T_0 appear in order
    let mut known = Vec::new();
    for tr in trs {
        for t in [&tr.a, &tr.b] {
            if let Term::Known(s) = t {
                known.push(s.rank() as i64);
            }
        }
    }
    let alt: i64 = known
        .iter()
        .rev()
        .enumerate()
        .map(|(j, r)| if j % 2 == 0 { *r } else { -r })
        .sum();
    assert_eq!(alt, 1, "terms {known:?}");
    assert!(matches!(&trs.last().unwrap().c, Term::Unknown { name, .. } if name == IDEAL));
}
