use proptest::prelude::*;
use seatcheck::bisim::{check_bisim, disjoint_union, largest_bisim, union_offsets, Relation};
use seatcheck::classify::{random_model, random_seat, ClassConstraints, RandomSeatParams};
use seatcheck::semiring::library;
use seatcheck::{evaluate, parse, FiniteTopology, Formula, Limits, Model, Seat, StateSet};

fn semiring_index() -> impl Strategy<Value = usize> {
    0..library::small_semirings(4).len()
}

fn formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        Just(Formula::prop("p")),
        Just(Formula::prop("q")),
        Just(Formula::Top),
        Just(Formula::Bot),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        let lit = prop_oneof![Just("0"), Just("1")];
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            inner.clone().prop_map(Formula::boxed),
            inner.clone().prop_map(Formula::dia),
            inner.clone().prop_map(Formula::all),
            (lit.clone(), inner.clone()).prop_map(|(l, a)| Formula::f(l, a)),
            (lit.clone(), inner.clone()).prop_map(|(l, a)| Formula::box_a(l, a)),
            (lit.clone(), lit.clone(), inner).prop_map(|(a, b, f)| Formula::kn(a, b, f)),
        ]
    })
}

fn model(states: usize, sr: usize, seed: u64) -> Model {
    let (_, s) = library::small_semirings(4).swap_remove(sr);
    let p = RandomSeatParams::new(states, s, ClassConstraints::default());
    random_model(&p, &["p", "q"], seed).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ideal_close_is_least_and_idempotent(sr in semiring_index(), gens in prop::collection::vec(0usize..4, 0..3)) {
        let (_, s) = library::small_semirings(4).swap_remove(sr);
        let els = s.elements().unwrap();
        let gens: Vec<_> = gens.iter().map(|&i| els[i % els.len()]).collect();
        let i = s.ideal_close(&gens);
        prop_assert!(s.ideal_is_closed(&i));
        for g in &gens {
            prop_assert!(i.contains(*g));
        }
        let members = s.ideal_members(&i).unwrap();
        prop_assert_eq!(s.ideal_close(&members), i);
        for j in s.all_ideals().unwrap() {
            if gens.iter().all(|g| j.contains(*g)) {
                prop_assert!(i.is_subset(&j));
            }
        }
    }

    #[test]
    fn additive_preorder_is_a_preorder(sr in semiring_index()) {
        let (_, s) = library::small_semirings(4).swap_remove(sr);
        let els = s.elements().unwrap();
        for &a in &els {
            prop_assert!(s.leq_add(a, a).unwrap());
            for &b in &els {
                for &c in &els {
                    if s.leq_add(a, b).unwrap() && s.leq_add(b, c).unwrap() {
                        prop_assert!(s.leq_add(a, c).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn interior_is_kuratowski(n in 1usize..5, sub in prop::collection::vec(0u64..16, 0..4)) {
        let names: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
        let mask = (1u64 << n) - 1;
        let sub: Vec<StateSet> = sub.iter().map(|&b| StateSet(b & mask)).collect();
        let t = FiniteTopology::generate(names, &sub, &Limits::default()).unwrap();
        for b in &sub {
            prop_assert!(t.is_open(*b));
        }
        for p in StateSet::all_subsets(n) {
            let ip = t.interior(p);
            prop_assert!(ip.is_subset(p));
            prop_assert_eq!(t.interior(ip), ip);
            prop_assert!(t.is_open(ip));
            for q in StateSet::all_subsets(n) {
                prop_assert_eq!(t.interior(p.intersect(q)), ip.intersect(t.interior(q)));
            }
        }
        prop_assert_eq!(t.interior(t.full()), t.full());
        // generated opens are exactly the unions of finite meets of the subbasis
        let again = FiniteTopology::from_opens(t.states().to_vec(), t.opens(), &Limits::default()).unwrap();
        prop_assert_eq!(again.opens(), t.opens());
    }

    #[test]
    fn print_parse_round_trip(f in formula()) {
        let text = f.to_string();
        prop_assert_eq!(parse(&text).unwrap(), f);
    }

    #[test]
    fn expansion_preserves_extent(f in formula(), n in 1usize..4, sr in semiring_index(), seed in any::<u64>()) {
        let m = model(n, sr, seed);
        let lits_ok = f.literals().iter().all(|l| m.semiring().parse_element(l).is_ok());
        prop_assume!(lits_ok);
        prop_assert_eq!(evaluate(&m, &f).unwrap(), evaluate(&m, &f.expand()).unwrap());
    }

    #[test]
    fn closed_seats_are_valid_and_stable(n in 1usize..4, sr in semiring_index(), seed in any::<u64>()) {
        let (_, s) = library::small_semirings(4).swap_remove(sr);
        let p = RandomSeatParams::new(n, s.clone(), ClassConstraints::default());
        let seat = random_seat(&p, seed).unwrap();
        prop_assert!(seat.validate().is_empty());
        let t = seat.topology();
        let raw: Vec<_> = t
            .opens()
            .iter()
            .enumerate()
            .flat_map(|(u, &o)| (0..n).map(move |x| (u, o, x)))
            .map(|(u, o, x)| seatcheck::RawEntry::ideal(o, Some(x), *seat.ideal_at(u, x)))
            .collect();
        let again = Seat::close(t.clone(), s, &raw).unwrap();
        prop_assert_eq!(again, seat);
    }

    #[test]
    fn union_restricts_to_components(n1 in 1usize..4, n2 in 1usize..4, sr in semiring_index(), seed in any::<u64>(), f in formula()) {
        let a = model(n1, sr, seed);
        let b = model(n2, sr, seed.wrapping_add(1));
        let lits_ok = f.literals().iter().all(|l| a.semiring().parse_element(l).is_ok());
        prop_assume!(lits_ok && !has_global(&f.expand()));
        let u = disjoint_union(&[&a, &b]).unwrap();
        let off = union_offsets(&[&a, &b]);
        let whole = evaluate(&u, &f).unwrap();
        for (k, m) in [&a, &b].into_iter().enumerate() {
            let part: StateSet = whole.iter().filter(|&i| i >= off[k] && i < off[k] + m.len()).map(|i| i - off[k]).collect();
            prop_assert_eq!(part, evaluate(m, &f).unwrap());
        }
    }

    #[test]
    fn largest_bisim_is_a_bisim_and_absorbs_unions(n1 in 1usize..4, n2 in 1usize..4, sr in semiring_index(), seed in any::<u64>(), global in any::<bool>()) {
        let a = model(n1, sr, seed);
        let b = model(n2, sr, seed.wrapping_mul(31).wrapping_add(7));
        let z = largest_bisim(&a, &b, global, &[]).unwrap();
        prop_assert!(check_bisim(&a, &b, &z, &[]).unwrap().ok());
        // the global one sits inside the plain one, and unions stay bisimulations
        let other = largest_bisim(&a, &b, false, &[]).unwrap();
        let joined = z.union(&other);
        let plain = Relation::new(joined.pairs.clone(), false);
        prop_assert!(check_bisim(&a, &b, &plain, &[]).unwrap().ok());
        prop_assert!(z.pairs.iter().all(|p| other.contains(*p)));
    }
}

fn has_global(f: &Formula) -> bool {
    match f {
        Formula::All(_) | Formula::Exists(_) => true,
        Formula::Prop(_) | Formula::Top | Formula::Bot => false,
        Formula::Not(a)
        | Formula::F(_, a)
        | Formula::Box(a)
        | Formula::Dia(a)
        | Formula::BoxA(_, a)
        | Formula::DiaA(_, a)
        | Formula::Bel(_, _, a)
        | Formula::Kn(_, _, a) => has_global(a),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            has_global(a) || has_global(b)
        }
    }
}

#[test]
fn bisimulations_on_a_model_and_itself() {
    let m = model(3, 0, 5);
    let diag = Relation::new((0..m.len()).map(|i| (i, i)).collect(), true);
    assert!(check_bisim(&m, &m, &diag, &[]).unwrap().ok());
    let z = largest_bisim(&m, &m, true, &[]).unwrap();
    assert!(diag.pairs.iter().all(|p| z.contains(*p)));
}
