//! The embedding of events into coherent sets of gambles, checked exhaustively on
//! small spaces.

use ipalg_core::testkit;
use ipalg_core::{event_union_meet, EventSet, Gamble, Scope, Space};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn all_events(space: &Space) -> Vec<EventSet> {
    let n = space.cell_count(space.full_scope()).unwrap();
    (0u32..1 << n)
        .map(|mask| EventSet::new(space, (0..n).filter(|i| mask & (1 << i) != 0)).unwrap())
        .collect()
}

fn all_scopes(space: &Space) -> Vec<Scope> {
    let k = space.num_variables();
    (0u64..1 << k)
        .map(|m| Scope::from_indices((0..k).filter(|i| m & (1 << i) != 0)))
        .collect()
}

/// Independent saturation: cells agreeing with some member on `s`.
fn saturate(space: &Space, a: &EventSet, s: Scope) -> Vec<usize> {
    let cells = space.enumerate_cells(space.full_scope()).unwrap();
    let agree = |x: &[usize], y: &[usize]| s.indices().all(|v| x[v] == y[v]);
    (0..cells.len())
        .filter(|&w| a.cells().iter().any(|&m| agree(&cells[w].0, &cells[m].0)))
        .collect()
}

fn check_embedding(space: &Space) {
    let events = all_events(space);
    let scopes = all_scopes(space);
    for a in &events {
        let da = a.embed();
        for b in &events {
            let combined = da.combine(&b.embed()).unwrap();
            let (meet, _) = event_union_meet(a, b).unwrap();
            assert!(combined.equals(&meet.embed()).unwrap(), "{a:?} {b:?}");
        }
        for &s in &scopes {
            let sat = a.cylindrify(s).unwrap();
            assert_eq!(sat.cells(), saturate(space, a, s));
            assert!(
                da.extract(s).unwrap().equals(&sat.embed()).unwrap(),
                "{a:?} {s:?}"
            );
        }
    }
}

#[test]
fn embedding_on_two_by_two() {
    check_embedding(&Space::binary(&["X", "Y"]));
}

#[test]
fn embedding_on_two_by_two_by_two() {
    check_embedding(&Space::binary(&["X", "Y", "Z"]));
}

#[test]
fn extreme_events() {
    let s = Space::binary(&["X"]);
    assert!(EventSet::empty(&s).unwrap().embed().is_contradiction());
    assert!(EventSet::full(&s).unwrap().embed().is_vacuous());
    let ab = Space::new([("X", ["a", "b"])]).unwrap();
    let a = EventSet::new(&ab, [0]).unwrap().embed();
    assert!(a
        .contains(&Gamble::from_ints(&ab, &[1, -5]).unwrap())
        .unwrap());
}

#[test]
fn saturation_laws() {
    let space = Space::binary(&["X", "Y", "Z"]);
    let scopes = all_scopes(&space);
    for a in all_events(&space) {
        for &s in &scopes {
            let sa = a.cylindrify(s).unwrap();
            assert!(a.is_subset(&sa));
            assert_eq!(sa.cylindrify(s).unwrap(), sa);
            for &t in &scopes {
                assert_eq!(
                    sa.cylindrify(t).unwrap(),
                    a.cylindrify(s.intersection(t)).unwrap()
                );
            }
        }
    }
}

#[test]
fn intersection_of_embeddings_is_embedding_of_union() {
    let space = Space::binary(&["X", "Y"]);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let events = all_events(&space);
    for a in &events {
        for b in &events {
            let (_, union) = event_union_meet(a, b).unwrap();
            let (da, db, du) = (a.embed(), b.embed(), union.embed());
            for _ in 0..15 {
                let f = testkit::random_gamble(&mut rng, &space, -2, 2);
                assert_eq!(
                    da.contains(&f).unwrap() && db.contains(&f).unwrap(),
                    du.contains(&f).unwrap()
                );
            }
            assert!(da.meet(&db).unwrap().equals(&du).unwrap());
        }
    }
}

#[test]
fn embedding_is_injective() {
    let space = Space::binary(&["X", "Y"]);
    let events = all_events(&space);
    for a in &events {
        for b in &events {
            assert_eq!(a.embed().equals(&b.embed()).unwrap(), a == b);
            assert_eq!(a.embed().leq(&b.embed()).unwrap(), b.is_subset(a));
        }
    }
}

#[test]
fn events_combined_with_generated_pieces() {
    let space = Space::binary(&["X", "Y"]);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for a in all_events(&space) {
        let d = testkit::random_coherent(&mut rng, &space, 2);
        let m = a.embed().combine(&d).unwrap();
        assert!(a.embed().leq(&m).unwrap());
        assert!(d.leq(&m).unwrap());
        for s in all_scopes(&space) {
            // ε_S(D_A) · ε_S(D) ≤ ε_S(D_A · D)
            let lhs = a
                .cylindrify(s)
                .unwrap()
                .embed()
                .combine(&d.extract(s).unwrap())
                .unwrap();
            assert!(lhs.leq(&m.extract(s).unwrap()).unwrap());
        }
    }
}
