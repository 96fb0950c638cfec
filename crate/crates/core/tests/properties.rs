use gammasplit::density::build_density_sequence;
use gammasplit::explorer::{beiter_counts, nvar_classify, representation_counts, rs_solve};
use gammasplit::periodicity::{detect_period, pisano, state_period_mod};
use gammasplit::sequences::{fibonacci, oddr};
use gammasplit::split::DEFAULT_ORACLE_CAP;
use gammasplit::{
    brute_force_split, gamma, gcd, nat, solve_split, term, term_mod, Nat, Ratio, SequenceSpec, SplitInstance,
};
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use proptest::prelude::*;

fn big(lo: u64, hi: u64) -> Nat {
    (BigUint::from(hi) << 64u32) + lo
}

fn spec_strategy() -> impl Strategy<Value = SequenceSpec> {
    prop_oneof![
        (1u32..=4).prop_map(|power| SequenceSpec::FibonacciPower { power }),
        (1u64..50, 1u64..50)
            .prop_filter("coprime", |(a, b)| a.gcd(b) == 1)
            .prop_map(|(a, b)| SequenceSpec::FibonacciLike { t1: nat(a), t2: nat(b) }),
        Just(SequenceSpec::Balancing),
        Just(SequenceSpec::LucasBalancing),
        (1u64..20)
            .prop_flat_map(|p| (Just(p), 0..p))
            .prop_map(|(p, r)| SequenceSpec::Arithmetic { p: nat(p), r: nat(r) }),
        (1u32..=6).prop_map(|k| SequenceSpec::KthPower { k }),
        (1u64..10, 2u64..10).prop_map(|(a, r)| SequenceSpec::ShiftedGeometric {
            a: nat(a),
            ratio: nat(r)
        }),
        Just(SequenceSpec::Naturals),
        Just(SequenceSpec::Odds),
        Just("powrec:c=1,1;t=1,1;init=1,3".parse().unwrap()),
        Just("powrec:c=2,3;t=1,1;init=2,5".parse().unwrap()),
        Just("powrec:c=1;t=2;init=2".parse().unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn solver_satisfies_equation_on_large_pairs(a in (any::<u64>(), 1u64..u64::MAX).prop_map(|(l, h)| big(l, h)),
                                                b in (any::<u64>(), 1u64..u64::MAX).prop_map(|(l, h)| big(l, h))) {
        let inst = SplitInstance::new(&a, &b).unwrap();
        let sol = solve_split(&a, &b).unwrap();
        prop_assert!(inst.satisfied_by(sol.delta, &sol.x, &sol.y));
        prop_assert_eq!(sol.delta, gamma(&a, &b).unwrap());
    }

    #[test]
    fn normalization(a in 1u64..5000, b in 1u64..5000, g in 1u64..50) {
        let (na, nb, ng) = (nat(a), nat(b), nat(g));
        let (sa, sb) = (&na * &ng, &nb * &ng);
        prop_assert_eq!(gamma(&sa, &sb).unwrap(), gamma(&na, &nb).unwrap());
        prop_assert_eq!(solve_split(&sa, &sb).unwrap(), solve_split(&na, &nb).unwrap());
    }

    #[test]
    fn divisibility_branch(a in 1u64..100_000, m in 1u64..1000) {
        let (na, nb) = (nat(a), nat(a * m));
        prop_assert_eq!(gamma(&na, &nb).unwrap(), 0);
        prop_assert_eq!(gamma(&nb, &na).unwrap(), 0);
    }

    #[test]
    fn oracle_agreement(a in 1u64..3000, b in 1u64..3000) {
        let (na, nb) = (nat(a), nat(b));
        let report = brute_force_split(&na, &nb, DEFAULT_ORACLE_CAP).unwrap();
        let sol = solve_split(&na, &nb).unwrap();
        prop_assert!(report.exactly_one());
        prop_assert!(report.solution.unwrap().same_triple(&sol));
    }

    #[test]
    fn term_mod_agrees_with_term(spec in spec_strategy(), n in 1u64..40, m in 2u64..1_000_000) {
        let exact = term(&spec, n);
        prop_assume!(exact.is_ok());
        prop_assert_eq!(term_mod(&spec, n, &nat(m)).unwrap(), exact.unwrap() % nat(m));
    }

    #[test]
    fn residue_orbit_repeats(spec in spec_strategy(), m in 2u64..200) {
        prop_assume!(spec.recurrence().is_some());
        let sp = state_period_mod(&spec, &nat(m)).unwrap();
        let start = sp.preperiod + 1;
        for n in start..start + 2 * sp.period {
            prop_assert_eq!(term_mod(&spec, n, &nat(m)).unwrap(), term_mod(&spec, n + sp.period, &nat(m)).unwrap());
        }
    }

    #[test]
    fn detected_period_is_consistent(prefix in prop::collection::vec(0u8..2, 0..12),
                                     cycle in prop::collection::vec(0u8..2, 1..12),
                                     repeats in 4usize..10) {
        let mut bits = prefix.clone();
        for _ in 0..repeats {
            bits.extend(&cycle);
        }
        let r = detect_period(&bits, 3).unwrap();
        prop_assert!((r.preperiod, r.period) <= (prefix.len(), cycle.len()));
        prop_assert!((r.preperiod..bits.len() - r.period).all(|i| bits[i] == bits[i + r.period]));
        prop_assert_eq!(r.zeros + r.ones, r.period);
    }

    #[test]
    fn density_steps_follow_the_rule(num in 1u64..50, extra in 1u64..50) {
        let p = Ratio::from_u64(num, num + extra).unwrap();
        let t = build_density_sequence(&p, 150).unwrap();
        for n in 2..=t.len() {
            let doubled = t.doubled_at(n);
            prop_assert_eq!(doubled, t.ratios[n - 2] < p);
            prop_assert_eq!(t.bits[n - 1] == 0, doubled);
        }
    }

    #[test]
    fn counting_dp_matches_enumeration(coeffs in prop::collection::vec(2u64..60, 2..4), target in 0usize..10_000) {
        let cnt = representation_counts(&coeffs, target);
        let (first, rest) = coeffs.split_first().unwrap();
        let (second, tail) = rest.split_first().unwrap();
        let mut found = 0u32;
        'outer: for x in 0..=target as u64 / first {
            let left = target as u64 - x * first;
            for y in 0..=left / second {
                let rem = left - y * second;
                let hit = match tail {
                    [] => rem == 0,
                    [c] => rem.is_multiple_of(*c),
                    _ => unreachable!(),
                };
                if hit {
                    found += 1;
                    if found >= 2 {
                        break 'outer;
                    }
                }
            }
        }
        prop_assert_eq!(cnt[target] as u32, found);
    }

    #[test]
    fn rs_solve_is_symmetric(a in 1u64..200, b in 1u64..200, r in -5i64..6, s in -5i64..6) {
        prop_assume!(a.gcd(&b) == 1);
        let left = rs_solve(a, b, r, s, 1_000_000).unwrap();
        let right = rs_solve(b, a, s, r, 1_000_000).unwrap();
        prop_assert_eq!(left.solution_counts, right.solution_counts);
        prop_assert_eq!(left.rhs, right.rhs);
    }
}

#[test]
fn classic_instance_reproduces_gamma() {
    for a in 1..=100u64 {
        for b in (1..=100u64).filter(|b| a.gcd(b) == 1) {
            let rec = nvar_classify(&[a, b], 1_000_000).unwrap();
            let sol = solve_split(&nat(a), &nat(b)).unwrap();
            assert_eq!(rec.unique_index(), Some(sol.delta as usize));
            let shifted = rs_solve(a, b, 1, 1, 1_000_000).unwrap();
            assert_eq!(shifted.unique_index(), Some(sol.delta as usize));
        }
    }
}

#[test]
fn beiter_density_swaps_roles() {
    for r in -3..=4i64 {
        for s in -3..=4i64 {
            assert_eq!(beiter_counts(r, s, 25), beiter_counts(s, r, 25), "r={r} s={s}");
        }
    }
}

#[test]
fn recurrence_fidelity() {
    for spec in [SequenceSpec::Balancing, SequenceSpec::LucasBalancing] {
        for n in 3..=30 {
            let v = term(&spec, n).unwrap() + term(&spec, n - 2).unwrap();
            assert_eq!(v, term(&spec, n - 1).unwrap() * 6u32);
        }
    }
    let (t1, t2) = (nat(4), nat(7));
    let spec = SequenceSpec::FibonacciLike {
        t1: t1.clone(),
        t2: t2.clone(),
    };
    for n in 3..=40 {
        let want = fibonacci(n - 2) * &t1 + fibonacci(n - 1) * &t2;
        assert_eq!(term(&spec, n).unwrap(), want);
        let g = gcd(&term(&spec, n).unwrap(), &term(&spec, n + 1).unwrap()).unwrap();
        assert!(g.is_one());
    }
}

#[test]
fn oddr_has_one_odd_solution() {
    for u in 1..=30u64 {
        for v in (1..=30u64).filter(|v| u.gcd(v) == 1) {
            let res = oddr(&nat(u), &nat(v)).unwrap();
            let r = &res.r;
            assert!(r.bit(0) && *r >= nat(1) && *r <= nat(u));
        }
    }
}

#[test]
fn pisano_orbits_are_pure() {
    for m in 2..=200u64 {
        let sp = state_period_mod(&SequenceSpec::fibonacci(), &nat(m)).unwrap();
        assert_eq!(sp.preperiod, 0, "m={m}");
        assert_eq!(sp.period, pisano(m).unwrap());
    }
}
