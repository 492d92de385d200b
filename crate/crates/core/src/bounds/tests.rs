use super::*;
use crate::cli::catalog::{bell, extended_bell, ghz, product, w3, werner, BellKind, ExtendedBell};
use crate::qmat::{
    pure_to_density, random_density, random_haar_pure, DensityMatrix, PartyDims, PureState, RandomSource,
};
use proptest::prelude::*;

fn cfg() -> RoofConfig {
    RoofConfig {
        restarts: 2,
        max_evals: 400,
        ..RoofConfig::default()
    }
}

fn rec(records: &[InequalityRecord], id: InequalityId) -> &InequalityRecord {
    records
        .iter()
        .find(|r| r.id == id)
        .unwrap_or_else(|| panic!("no {id} record"))
}

fn run(state: &State) -> Vec<InequalityRecord> {
    run_registry(state, &cfg(), &Tolerances::default())
}

#[test]
fn verdict_rules() {
    use Orientation::*;
    assert_eq!(verdict(-0.5, false, false, AtMost, 1e-8), Verdict::Violated);
    assert_eq!(verdict(-0.5, true, false, AtMost, 1e-3), Verdict::Inconclusive);
    assert_eq!(verdict(-0.5, true, false, AtLeast, 1e-3), Verdict::Violated);
    assert_eq!(verdict(-0.5, false, true, AtLeast, 1e-3), Verdict::Inconclusive);
    assert_eq!(verdict(-0.5, true, true, AtLeast, 1e-3), Verdict::Inconclusive);
    assert_eq!(verdict(0.0, false, false, AtMost, 1e-8), Verdict::Holds);
    assert_eq!(verdict(-1e-9, false, false, AtMost, 1e-8), Verdict::Holds);
    assert_eq!(verdict(f64::NAN, false, false, AtMost, 1e-8), Verdict::Skipped);
}

#[test]
fn registry_names_are_unique_and_parse_back() {
    let mut names: Vec<&str> = InequalityId::ALL.iter().map(|i| i.name()).collect();
    let n = names.len();
    names.sort_unstable();
    names.dedup();
    assert_eq!(names.len(), n);
    for &id in InequalityId::ALL {
        assert_eq!(id.name().parse::<InequalityId>().unwrap(), id);
    }
    assert!("Q9".parse::<InequalityId>().is_err());
}

#[test]
fn selection_ranges_follow_registry_order() {
    let sel = parse_selection("T1..B3L").unwrap();
    assert_eq!(sel.first(), Some(&InequalityId::T1));
    assert_eq!(sel.last(), Some(&InequalityId::B3L));
    assert_eq!(sel.len(), 14);
    let sel = parse_selection("M3L, E1").unwrap();
    assert_eq!(sel, vec![InequalityId::E1, InequalityId::M3L]);
    assert!(parse_selection("B3L..T1").is_err());
}

#[test]
fn ghz3_records() {
    let r = run(&State::Pure(ghz(3).unwrap()));
    assert_eq!(r.len(), 12);
    assert!(r.iter().all(|x| x.verdict == Verdict::Holds), "{r:#?}");
    let t1 = rec(&r, InequalityId::T1);
    assert!((t1.lhs - 2.0).abs() < 1e-12 && (t1.rhs - 2.0).abs() < 1e-12);
    let p3u = rec(&r, InequalityId::P3U);
    assert!((p3u.lhs - 1.0).abs() < 1e-12 && (p3u.rhs - 1.5).abs() < 1e-12);
    assert!(rec(&r, InequalityId::P3L).slack.abs() <= 1e-9);
}

#[test]
fn extended_bell_is_a_p3l_equality() {
    for which in ExtendedBell::ALL {
        let s = State::Pure(extended_bell(which, BellKind::PhiPlus, 0.3, 0.4));
        let r = evaluate_inequality(InequalityId::P3L, &s, &cfg(), &Tolerances::default()).unwrap();
        assert!((r.lhs - 5.0 / 6.0).abs() < 1e-9);
        assert!((r.rhs - 5.0 / 6.0).abs() < 1e-9);
        assert!(r.slack.abs() <= 1e-9);
        assert_eq!(r.verdict, Verdict::Holds);
    }
}

#[test]
fn product_states_hold_with_zero_sides() {
    for dims in [vec![2, 2, 2], vec![2, 2, 2, 2]] {
        let r = run(&State::Pure(product(&dims).unwrap()));
        assert!(!r.is_empty());
        for x in &r {
            match x.verdict {
                Verdict::Skipped => assert!(x.note.as_deref().unwrap().contains("undefined"), "{x:?}"),
                v => {
                    assert_eq!(v, Verdict::Holds, "{x:?}");
                    assert!(x.lhs.abs() < 1e-9 && x.rhs.abs() < 1e-9, "{x:?}");
                }
            }
        }
    }
}

#[test]
fn two_qubit_states_only_get_e1() {
    let r = run(&State::Mixed(werner(0.7).unwrap()));
    assert_eq!(r.len(), 1);
    assert_eq!(r[0].id, InequalityId::E1);
    assert_eq!(r[0].verdict, Verdict::Holds);
}

#[test]
fn arity_mismatch_is_an_error() {
    let s = State::Pure(bell(BellKind::PhiPlus));
    assert!(evaluate_inequality(InequalityId::P3U, &s, &cfg(), &Tolerances::default()).is_err());
    let m = State::Mixed(pure_to_density(&w3()));
    assert!(evaluate_inequality(InequalityId::P3U, &m, &cfg(), &Tolerances::default()).is_err());
}

#[test]
fn ghz4_lower_bound_equalities() {
    let r = run(&State::Pure(ghz(4).unwrap()));
    for id in [InequalityId::P4L1Free, InequalityId::P4L2Free] {
        let x = rec(&r, id);
        assert!(x.slack.abs() <= 1e-3, "{x:?}");
    }
    // no pair entanglement, so γ₂ is undefined
    assert_eq!(rec(&r, InequalityId::P4L1).verdict, Verdict::Skipped);
    assert!(r.iter().all(|x| x.verdict != Verdict::Violated));
}

#[test]
fn published_intermediate_lower_bound_fails_on_two_bell_pairs() {
    let bb = bell(BellKind::PhiPlus).tensor(&bell(BellKind::PhiPlus));
    let r = run(&State::Pure(bb));
    let p4l1 = rec(&r, InequalityId::P4L1);
    assert_eq!(p4l1.verdict, Verdict::Violated, "{p4l1:?}");
    // lhs 32/21 against (5 + 2·½)/42 · 2 + 8/6
    assert!((p4l1.rhs - (12.0 / 42.0 + 8.0 / 6.0)).abs() < 1e-9);
    for id in [
        InequalityId::P4L2,
        InequalityId::P4L3,
        InequalityId::P4U1,
        InequalityId::P4U3,
    ] {
        assert_eq!(rec(&r, id).verdict, Verdict::Holds, "{id}");
    }
}

#[test]
fn pointer_mixture_skips_gamma_entry_but_checks_free_variant() {
    let dims = PartyDims::qubits(3);
    let z = pure_to_density(&PureState::basis(&[0; 3], dims.clone()).unwrap());
    let o = pure_to_density(&PureState::basis(&[1; 3], dims).unwrap());
    let rho = DensityMatrix::mixture(&[(0.5, &z), (0.5, &o)]).unwrap();
    let r = run(&State::Mixed(rho));
    assert_eq!(rec(&r, InequalityId::M3L).verdict, Verdict::Skipped);
    assert_eq!(rec(&r, InequalityId::M3LFree).verdict, Verdict::Holds);
    assert_eq!(rec(&r, InequalityId::M3U).verdict, Verdict::Holds);
}

#[test]
fn mixed_tri_bounds_on_random_states() {
    for i in 0..3 {
        let mut rng = RandomSource::stream(8, i);
        let rho = random_density(&PartyDims::qubits(3), 2, &mut rng).unwrap();
        let r = run(&State::Mixed(rho));
        for id in [InequalityId::M3U, InequalityId::M3L, InequalityId::M3LFree] {
            let x = rec(&r, id);
            assert_ne!(x.verdict, Verdict::Violated, "{x:?}");
        }
        assert!(rec(&r, InequalityId::M3U).lhs_estimate);
    }
}

#[test]
fn upper_and_halved_upper_agree_on_pure_states() {
    let mut rng = RandomSource::new(99);
    for _ in 0..20 {
        let psi = random_haar_pure(&PartyDims::qubits(3), &mut rng);
        let r = run(&State::Pure(psi));
        let a = rec(&r, InequalityId::P3U).rhs;
        let b = rec(&r, InequalityId::P3U2).rhs;
        assert!((a - b).abs() < 1e-9);
    }
}

#[test]
fn digest_distinguishes_states() {
    let a = state_digest(&State::Pure(ghz(3).unwrap()));
    let b = state_digest(&State::Pure(w3()));
    assert_eq!(a.len(), 16);
    assert_ne!(a, b);
    assert_eq!(a, state_digest(&State::Pure(ghz(3).unwrap())));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn exact_entries_never_fail_on_pure_triples(seed in any::<u64>()) {
        let mut rng = RandomSource::new(seed);
        let psi = random_haar_pure(&PartyDims::qubits(3), &mut rng);
        let r = run_selected(&State::Pure(psi), &InequalityId::exact_entries(), &cfg(), &Tolerances::default());
        prop_assert_eq!(r.len(), 11);
        for x in r {
            prop_assert_eq!(x.verdict, Verdict::Holds, "{:?}", x);
        }
    }

    #[test]
    fn entropy_entries_hold_on_four_qubit_states(seed in any::<u64>(), rank in 1usize..=16) {
        let mut rng = RandomSource::new(seed);
        let state = if rank == 1 {
            State::Pure(random_haar_pure(&PartyDims::qubits(4), &mut rng))
        } else {
            State::Mixed(random_density(&PartyDims::qubits(4), rank, &mut rng).unwrap())
        };
        let r = run_selected(&state, &InequalityId::exact_entries(), &cfg(), &Tolerances::default());
        prop_assert!(r.len() >= 10);
        for x in r {
            prop_assert_eq!(x.verdict, Verdict::Holds, "{:?}", x);
        }
    }

    #[test]
    fn estimates_never_produce_upper_bound_violations(seed in any::<u64>()) {
        let mut rng = RandomSource::new(seed);
        let rho = random_density(&PartyDims::qubits(3), 2, &mut rng).unwrap();
        let quick = RoofConfig { restarts: 1, max_evals: 60, ..RoofConfig::default() };
        for x in run(&State::Mixed(rho)).into_iter().chain(
            run_registry(&State::Mixed(random_density(&PartyDims::qubits(3), 3, &mut rng).unwrap()), &quick, &Tolerances::default())
        ) {
            if x.id.orientation() == Orientation::AtMost && x.lhs_estimate {
                prop_assert_ne!(x.verdict, Verdict::Violated);
            }
        }
    }
}
