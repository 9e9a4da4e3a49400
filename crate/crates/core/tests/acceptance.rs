//! End-to-end acceptance checks, run without the test harness so that the
//! one-line `PASS` or `FAIL` report of each criterion is always printed.
//!
//! Criterion 7 fails on the printed three-point fixture, whose empty-set
//! annotation breaks the evidence clause (see `gallery::a13_m1_amended`).
//! That failure is expected and reported; any other failure, or criterion 7
//! turning green, fails the test.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use seatcheck::bisim::{check_bisim, disjoint_union, largest_bisim, modal_equiv_test, Relation};
use seatcheck::classify::{
    all_uniform_seats, characterization_crosscheck, check_suite, classify, random_model,
    random_seat, suite, ClassConstraints, RandomSeatParams, SchemeOptions, Status,
};
use seatcheck::corpus::{Corpus, DEFAULT_CLASS_CAP};
use seatcheck::gallery;
use seatcheck::semantics::{bel, evaluate, for_op, int_op, kn, Evaluator};
use seatcheck::semiring::library;
use seatcheck::{Element, FiniteTopology, Formula, Limits, Model, Seat, StateSet};

const C1_LIMIT: Duration = Duration::from_secs(1);
const C2_LIMIT: Duration = Duration::from_secs(300);
const RANDOM_SEATS: u64 = 200;
const RANDOM_PAIRS: u64 = 50;
const REMARK_MODELS: usize = 20;
const EXPECTED_FAILURES: [u32; 1] = [7];

struct Outcome {
    id: u32,
    pass: bool,
    detail: String,
}

fn report(id: u32, title: &str, pass: bool, detail: String) -> Outcome {
    println!(
        "{} {id:>2} {title}: {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    Outcome { id, pass, detail }
}

fn lits(s: &seatcheck::Semiring) -> Vec<String> {
    s.elements()
        .unwrap()
        .into_iter()
        .map(|e| s.name(e))
        .collect()
}

/// The seeded seats shared by criteria 2 and 3: carriers of one to four
/// states, every library semiring with at most four elements, and class
/// constraints cycling through none, strong bounded, strong uniform bounded.
fn seeded_seats() -> Vec<Seat> {
    let semirings = library::small_semirings(4);
    let constraints = [
        ClassConstraints::default(),
        ClassConstraints::strong_bounded(),
        ClassConstraints::strong_uniform_bounded(),
    ];
    (0..RANDOM_SEATS)
        .map(|i| {
            let (_, s) = &semirings[i as usize % semirings.len()];
            let c = constraints[(i / 4) as usize % 3];
            let p = RandomSeatParams::new(1 + (i as usize % 4), s.clone(), c);
            random_seat(&p, 0x5eed_0000 + i).expect("random seat")
        })
        .collect()
}

fn c1() -> Outcome {
    let start = Instant::now();
    let m = gallery::inta_counterexample();
    let s = &m.seat;
    let a = gallery::element(m.semiring(), "42");
    let t = m.topology();
    let set = |v: &[&str]| t.set_from_names(v).unwrap();
    let whole = int_op(s, a, t.full());
    let point = int_op(s, a, set(&["x"]));
    let meet = int_op(s, a, set(&["x", "y"])).intersect(int_op(s, a, set(&["x", "z"])));
    let elapsed = start.elapsed();
    let pass =
        whole == set(&["x"]) && point.is_empty() && meet == set(&["x"]) && elapsed < C1_LIMIT;
    report(
        1,
        "weighted interior counterexample",
        pass,
        format!(
            "Int42(X)={}, Int42({{x}})={}, meet={} in {elapsed:?}",
            t.format_set(whole),
            t.format_set(point),
            t.format_set(meet)
        ),
    )
}

fn c2(seats: &[Seat]) -> Outcome {
    let start = Instant::now();
    let opts = SchemeOptions::default();
    let mut checked = 0usize;
    let mut failures = Vec::new();
    let mut by_class = [0usize; 3];
    for (i, seat) in seats.iter().enumerate() {
        let rep = classify(seat);
        let sb = rep.strong.holds() && rep.bounded() == Some(true);
        let uniform = sb && rep.uniform.holds();
        let mut names: Vec<&str> = vec!["s4k"];
        if sb {
            names.push("s4sb-forall");
        }
        if uniform {
            names.extend(["s4sub", "s4sub-forall"]);
        }
        by_class[usize::from(sb) + usize::from(uniform)] += 1;
        let mut seen = BTreeSet::new();
        let list: Vec<_> = names
            .iter()
            .flat_map(|n| suite(n).unwrap())
            .filter(|sch| seen.insert(sch.name))
            .collect();
        for r in check_suite(seat, &list, &opts).unwrap() {
            checked += 1;
            if r.status != Status::Valid {
                failures.push(format!("seat {i} {} {:?}", r.scheme, r.status));
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = failures.is_empty() && elapsed < C2_LIMIT;
    report(
        2,
        "soundness suites",
        pass,
        format!(
            "{checked} scheme checks on {} seats (plain/strong bounded/uniform {:?}), {} not valid, {elapsed:?}{}",
            seats.len(),
            by_class,
            failures.len(),
            failures.first().map(|f| format!("; first: {f}")).unwrap_or_default()
        ),
    )
}

fn c3(seats: &[Seat]) -> Outcome {
    let mut mismatches = Vec::new();
    let mut sb = 0;
    let mut uniform = 0;
    for (i, seat) in seats.iter().enumerate() {
        let r = characterization_crosscheck(seat, 1 << 22).unwrap();
        sb += usize::from(r.strong_bounded == Some(true));
        uniform += usize::from(r.strong_bounded == Some(true) && r.uniform == Some(true));
        if r.consistent != Some(true) {
            mismatches.push(i);
        }
    }
    report(
        3,
        "characterization crosscheck",
        mismatches.is_empty(),
        format!(
            "{} seats, {sb} strong bounded, {uniform} of those uniform, mismatches {mismatches:?}",
            seats.len()
        ),
    )
}

fn c4() -> Outcome {
    let semirings = library::small_semirings(4);
    let mut violations = 0usize;
    let mut checks = 0usize;
    for i in 0..RANDOM_SEATS {
        let (_, s) = &semirings[i as usize % semirings.len()];
        let p = RandomSeatParams::new(1 + (i as usize % 3), s.clone(), ClassConstraints::default());
        let seat = random_seat(&p, 0x1e33_0000 + i).unwrap();
        let t = seat.topology();
        let els = s.elements().unwrap();
        let all: Vec<StateSet> = StateSet::all_subsets(seat.len()).collect();
        for &a in &els {
            for &pp in &all {
                let fa = for_op(&seat, a, pp);
                checks += 2;
                violations += usize::from(int_op(&seat, a, pp) != fa.intersect(t.interior(pp)));
                violations += usize::from(for_op(&seat, a, t.interior(pp)) != fa);
                for &q in &all {
                    if pp.is_subset(q) {
                        checks += 1;
                        violations += usize::from(!fa.is_subset(for_op(&seat, a, q)));
                    }
                    for &b in &els {
                        checks += 1;
                        let lhs = fa.intersect(for_op(&seat, b, q));
                        let rhs = for_op(&seat, s.times(a, b), pp.intersect(q));
                        violations += usize::from(!lhs.is_subset(rhs));
                    }
                }
            }
        }
    }
    report(
        4,
        "operator algebra",
        violations == 0,
        format!("{checks} pointwise-set checks on {RANDOM_SEATS} seats, {violations} violations"),
    )
}

/// Every topology on `n` points, by testing each family of nontrivial subsets.
fn all_topologies(n: usize) -> Vec<FiniteTopology> {
    let names: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
    let full = StateSet::full(n);
    let middle: Vec<StateSet> = StateSet::all_subsets(n)
        .filter(|&u| !u.is_empty() && u != full)
        .collect();
    let mut out = Vec::new();
    for mask in 0u64..(1 << middle.len()) {
        let mut opens = vec![StateSet::EMPTY, full];
        opens.extend(
            middle
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &u)| u),
        );
        opens.dedup();
        if let Ok(t) = FiniteTopology::from_opens(names.clone(), &opens, &Limits::default()) {
            out.push(t);
        }
    }
    out
}

fn c5() -> Outcome {
    let s = library::truncated_tropical(2);
    let els = s.elements().unwrap();
    let mut seats = 0usize;
    let mut topologies = 0usize;
    let mut mismatches = 0usize;
    let mut checks = 0usize;
    for n in 1..=3 {
        for t in all_topologies(n) {
            topologies += 1;
            for seat in all_uniform_seats(&t, &s).unwrap() {
                let rep = classify(&seat);
                if !(rep.strong.holds() && rep.bounded() == Some(true)) {
                    continue;
                }
                seats += 1;
                for p in StateSet::all_subsets(n) {
                    let m = Model::new(seat.clone(), [("p".to_string(), p)].into()).unwrap();
                    let mut ev = Evaluator::new(&m);
                    for &a in &els {
                        for &b in &els {
                            let (la, lb) = (s.name(a), s.name(b));
                            let fb = Formula::bel(&la, &lb, Formula::prop("p"));
                            let fk = Formula::kn(&la, &lb, Formula::prop("p"));
                            checks += 2;
                            mismatches +=
                                usize::from(ev.extent(&fb).unwrap() != bel(&seat, a, b, p));
                            mismatches +=
                                usize::from(ev.extent(&fk).unwrap() != kn(&seat, a, b, p));
                        }
                    }
                }
            }
        }
    }
    let pass = mismatches == 0 && seats > 0;
    report(
        5,
        "belief and knowledge bridge",
        pass,
        format!(
            "{topologies} topologies, {seats} uniform strong bounded seats, {checks} comparisons, {mismatches} mismatches"
        ),
    )
}

fn c6() -> Outcome {
    let semirings = library::small_semirings(4);
    let mut mismatches = 0usize;
    let mut classes = 0usize;
    let mut incomplete = 0usize;
    for i in 0..RANDOM_PAIRS {
        let (_, s) = &semirings[i as usize % semirings.len()];
        let p1 =
            RandomSeatParams::new(1 + (i as usize % 3), s.clone(), ClassConstraints::default());
        let p2 = RandomSeatParams::new(
            1 + ((i as usize / 3) % 3),
            s.clone(),
            ClassConstraints::default(),
        );
        let m1 = random_model(&p1, &["p", "q"], 0x6200 + 2 * i).unwrap();
        let m2 = random_model(&p2, &["p", "q"], 0x6201 + 2 * i).unwrap();
        let u = disjoint_union(&[&m1, &m2]).unwrap();
        let corpus = Corpus::build(&[&m1, &m2, &u], &lits(s), 2, false, DEFAULT_CLASS_CAP).unwrap();
        let Some(all) = corpus.classes(DEFAULT_CLASS_CAP) else {
            incomplete += 1;
            continue;
        };
        incomplete += usize::from(!corpus.complete());
        for c in all {
            classes += 1;
            let whole = c.extents[2].0;
            let left = StateSet(whole & StateSet::full(m1.len()).0);
            let right = StateSet(whole >> m1.len());
            mismatches += usize::from(left != c.extents[0] || right != c.extents[1]);
        }
    }
    // two uniform one-point seats whose union is not uniform
    let s = library::boolean();
    let point = FiniteTopology::generate(vec!["x".into()], &[], &Limits::default()).unwrap();
    let uniform = all_uniform_seats(&point, &s).unwrap();
    let mut witness = None;
    'search: for (i, a) in uniform.iter().enumerate() {
        for b in &uniform[i..] {
            let ma = Model::new(a.clone(), Default::default()).unwrap();
            let mb = Model::new(b.clone(), Default::default()).unwrap();
            let u = disjoint_union(&[&ma, &mb]).unwrap();
            if classify(&u.seat).uniform.fails() {
                witness = Some((a.describe(), b.describe()));
                break 'search;
            }
        }
    }
    let pass = mismatches == 0 && incomplete == 0 && witness.is_some();
    report(
        6,
        "disjoint unions",
        pass,
        format!(
            "{RANDOM_PAIRS} pairs, {classes} depth-2 classes, {mismatches} mismatches, {incomplete} incomplete; non-uniform union {}",
            if witness.is_some() { "found" } else { "not found" }
        ),
    )
}

fn bisim_line(m1: &Model, m2: &Model, z: &Relation, extra: &[Element]) -> (bool, String) {
    let r = check_bisim(m1, m2, z, extra).unwrap();
    match &r.violation {
        None => (true, "bisimulation".into()),
        Some(v) => (
            false,
            format!("clause {} fails: {}", v.clause.roman(), v.detail),
        ),
    }
}

fn c7() -> Outcome {
    let probes = gallery::probe_literals();
    let mut notes = Vec::new();
    let mut pass = true;

    let (a, b) = (gallery::a12_m1(), gallery::a12_m2());
    let z = gallery::z12();
    let (ok, line) = bisim_line(&a, &b, &z, &[]);
    pass &= ok && !z.global;
    notes.push(format!("12: {line}"));
    let eq = modal_equiv_test(&a, &b, &z, 2, &probes, false).unwrap();
    pass &= eq.complete && eq.disagreements.is_empty();
    notes.push(format!("{} disagreements", eq.disagreements.len()));
    let ap = Formula::all(Formula::prop("p"));
    let split = evaluate(&a, &ap).unwrap().contains(0) && !evaluate(&b, &ap).unwrap().contains(0);
    pass &= split;
    notes.push(format!("A p separates: {split}"));

    let z = gallery::z13();
    let m2 = gallery::a13_m2();
    for (name, m1) in [
        ("13", gallery::a13_m1()),
        ("13 amended", gallery::a13_m1_amended()),
    ] {
        let (ok, line) = bisim_line(&m1, &m2, &z, &[]);
        let eq = modal_equiv_test(&m1, &m2, &z, 2, &probes, true).unwrap();
        let agree = eq.complete && eq.disagreements.is_empty();
        let costs = (
            classify(&m1.seat).cost_seat.holds(),
            classify(&m2.seat).cost_seat.holds(),
        );
        let sep = eq
            .disagreements
            .first()
            .map(|d| format!(" (e.g. {} at {:?})", d.formula, d.pair))
            .unwrap_or_default();
        notes.push(format!(
            "{name}: {line}, {} disagreements{sep}, cost seat {costs:?}",
            eq.disagreements.len()
        ));
        // only the printed fixture counts toward the criterion
        if name == "13" {
            pass &= ok && z.global && agree && costs == (false, true);
        }
    }
    report(7, "bisimulation fixtures", pass, notes.join("; "))
}

fn c8() -> Outcome {
    let semirings = library::small_semirings(4);
    let mut related = 0usize;
    let mut disagreements = 0usize;
    let mut not_bisim = 0usize;
    let mut incomplete = 0usize;
    for i in 0..RANDOM_PAIRS {
        let (_, s) = &semirings[i as usize % semirings.len()];
        let c = if i % 2 == 0 {
            ClassConstraints::default()
        } else {
            ClassConstraints::strong_uniform_bounded()
        };
        let p1 = RandomSeatParams::new(1 + ((i as usize / 3) % 3), s.clone(), c);
        let p2 = RandomSeatParams::new(1 + (i as usize % 3), s.clone(), c);
        let m1 = random_model(&p1, &["p"], 0x6400 + 2 * i).unwrap();
        let other = random_model(&p2, &["p"], 0x6401 + 2 * i).unwrap();
        // every third pair embeds the left model in the right one, so that
        // the largest bisimulation is never trivially empty there
        let m2 = if i % 3 == 0 {
            disjoint_union(&[&other, &m1]).unwrap()
        } else {
            other
        };
        let global = i % 4 < 2;
        let z = largest_bisim(&m1, &m2, global, &[]).unwrap();
        not_bisim += usize::from(!check_bisim(&m1, &m2, &z, &[]).unwrap().ok());
        related += z.pairs.len();
        let eq = modal_equiv_test(&m1, &m2, &z, 2, &lits(s), z.global).unwrap();
        incomplete += usize::from(!eq.complete);
        disagreements += eq.disagreements.len();
    }
    let pass = disagreements == 0 && not_bisim == 0 && incomplete == 0 && related > 0;
    report(
        8,
        "largest bisimulations preserve formulas",
        pass,
        format!(
            "{RANDOM_PAIRS} pairs, {related} related pairs, {disagreements} disagreements, {not_bisim} failed re-checks, {incomplete} incomplete"
        ),
    )
}

fn c9() -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;
    let flags = |m: &Model| {
        let r = classify(&m.seat);
        (
            r.strong.as_option(),
            r.bounded(),
            r.uniform.as_option(),
            r.zero_bounded.as_option(),
        )
    };
    let rbac = gallery::rbac(&gallery::RbacParams::example()).unwrap();
    let (strong, bounded, uniform, _) = flags(&rbac);
    let ok = strong == Some(true) && bounded == Some(true) && uniform == Some(true);
    pass &= ok;
    notes.push(format!("rbac {ok}"));

    let graph = gallery::graph_exploration(&gallery::GraphParams::example()).unwrap();
    let (strong, bounded, uniform, _) = flags(&graph);
    let ok = strong == Some(true) && bounded == Some(true) && uniform == Some(false);
    pass &= ok;
    notes.push(format!("graph {ok}"));

    let agents = gallery::agents(&gallery::AgentsParams::example()).unwrap();
    let (strong, _, uniform, zero) = flags(&agents);
    let ok = strong == Some(false) && uniform == Some(false) && zero == Some(false);
    pass &= ok;
    notes.push(format!("agents {ok}"));

    let params = gallery::BorelParams::example();
    let borel = gallery::borel_cost(&params).unwrap();
    let cost_seat = classify(&borel.seat).cost_seat.holds();
    let mut exact = 0usize;
    let mut total = 0usize;
    for &u in borel.topology().opens() {
        for x in 0..borel.len() {
            total += 1;
            let got = borel.seat.cost(u, x).unwrap();
            let want = params.cost(u, x).unwrap();
            let same = got.attained && got.value == Element::Num(seatcheck::Ext::Fin(want));
            exact += usize::from(same);
        }
    }
    let ok = cost_seat && exact == total;
    pass &= ok;
    notes.push(format!(
        "borel cost seat {cost_seat}, {exact}/{total} costs exact"
    ));
    report(9, "gallery classification", pass, notes.join(", "))
}

fn c10() -> Outcome {
    let semirings = library::small_semirings(4);
    let mut models = Vec::new();
    let mut seed = 0x5100u64;
    while models.len() < REMARK_MODELS && seed < 0x5100 + 20_000 {
        let (_, s) = &semirings[seed as usize % semirings.len()];
        let c = ClassConstraints {
            bounded: Some(true),
            ..ClassConstraints::default()
        };
        let p = RandomSeatParams::new(1 + (seed as usize % 3), s.clone(), c);
        seed += 1;
        let Ok(m) = random_model(&p, &["p", "q"], seed) else {
            continue;
        };
        let full = m.topology().full();
        let one = m.semiring().one();
        let only_full = (0..m.len()).all(|x| m.seat.evidence_at(one, x).unwrap() == vec![full]);
        // skip carriers where the condition holds only because X is the sole nonempty open
        if only_full && m.topology().opens().len() > 2 {
            models.push(m);
        }
    }
    let mut mismatches = 0usize;
    let mut classes = 0usize;
    let mut formula_checks = 0usize;
    for m in &models {
        let one = m.semiring().one();
        let one_lit = m.semiring().name(one);
        let corpus = Corpus::build(&[m], &lits(m.semiring()), 2, true, DEFAULT_CLASS_CAP).unwrap();
        let full = m.topology().full();
        for c in corpus.classes(DEFAULT_CLASS_CAP).unwrap() {
            classes += 1;
            let e = c.extents[0];
            let all = if e == full { full } else { StateSet::EMPTY };
            mismatches += usize::from(all != int_op(&m.seat, one, e));
        }
        let mut ev = Evaluator::new(m);
        for g in corpus.generators() {
            formula_checks += 1;
            let a = ev.extent(&Formula::all(g.witness.clone())).unwrap();
            let b = ev
                .extent(&Formula::box_a(&one_lit, g.witness.clone()))
                .unwrap();
            mismatches += usize::from(a != b);
        }
    }
    let pass = models.len() == REMARK_MODELS && mismatches == 0;
    report(
        10,
        "global modality as unit-resource box",
        pass,
        format!(
            "{} models, {classes} depth-2 classes, {formula_checks} formula pairs, {mismatches} mismatches",
            models.len()
        ),
    )
}

fn main() {
    let seats = seeded_seats();
    let outcomes = vec![
        c1(),
        c2(&seats),
        c3(&seats),
        c4(),
        c5(),
        c6(),
        c7(),
        c8(),
        c9(),
        c10(),
    ];
    let failed: Vec<u32> = outcomes.iter().filter(|o| !o.pass).map(|o| o.id).collect();
    println!(
        "{} of {} criteria pass; failing: {failed:?}; expected failing: {EXPECTED_FAILURES:?}",
        outcomes.len() - failed.len(),
        outcomes.len()
    );
    let unexpected: Vec<&Outcome> = outcomes
        .iter()
        .filter(|o| o.pass == EXPECTED_FAILURES.contains(&o.id))
        .collect();
    if !unexpected.is_empty() {
        for o in unexpected {
            eprintln!("unexpected outcome for criterion {}: {}", o.id, o.detail);
        }
        std::process::exit(1);
    }
}
