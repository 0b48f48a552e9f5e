//! The ten acceptance criteria, each printed as one PASS/FAIL line with its
//! running time against the allowed budget.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use ipalg_core::testkit::{self, oracle};
use ipalg_core::{
    check_compatibility, h, h_inverse, join_tree_marginals, pairwise_compatible, rip_theorem_check,
    satisfies_rip, ConePiece, Content, ContentKind, EventSet, Gamble, GlobalLabeled, KnowledgeBase,
    LabeledPiece, LowerPrevision, Scope, Space, Verdict,
};
use ipalg_lp::rational::{int, ratio};
use ipalg_lp::{solve, LinearProgram, LpOutcome, Rational, Relation};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn eq(a: &ConePiece, b: &ConePiece) -> bool {
    a.equals(b).unwrap()
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn small_space<R: Rng>(rng: &mut R) -> Space {
    testkit::binary_space(rng.gen_range(1..=3))
}

fn cells(space: &Space) -> usize {
    space.cell_count(space.full_scope()).unwrap()
}

fn axiom_suite() {
    let mut rng = rng(1);
    for _ in 0..200 {
        let space = small_space(&mut rng);
        let d1 = testkit::random_generated(&mut rng, &space, 3);
        let d2 = testkit::random_generated(&mut rng, &space, 3);
        let d3 = testkit::random_generated(&mut rng, &space, 3);
        let s = testkit::random_scope(&mut rng, &space);
        let t = testkit::random_scope(&mut rng, &space);
        let null = ConePiece::contradiction(&space);
        let unit = ConePiece::vacuous(&space);

        let d12 = d1.combine(&d2).unwrap();
        assert!(eq(&d12, &d2.combine(&d1).unwrap()), "commutativity");
        assert!(
            eq(
                &d12.combine(&d3).unwrap(),
                &d1.combine(&d2.combine(&d3).unwrap()).unwrap()
            ),
            "associativity"
        );
        assert!(eq(&d1.combine(&d1).unwrap(), &d1), "idempotency");
        assert!(eq(&d1.combine(&unit).unwrap(), &d1), "unit");
        assert!(d1.combine(&null).unwrap().is_contradiction(), "null");

        assert!(null.extract(s).unwrap().is_contradiction(), "E1");
        let e1 = d1.extract(s).unwrap();
        assert!(eq(&e1.combine(&d1).unwrap(), &d1), "E2");
        assert!(
            eq(
                &e1.combine(&d2).unwrap().extract(s).unwrap(),
                &e1.combine(&d2.extract(s).unwrap()).unwrap()
            ),
            "E3"
        );
        assert!(
            eq(
                &d1.extract(t).unwrap().extract(s).unwrap(),
                &d1.extract(s.intersection(t)).unwrap()
            ),
            "composition of extractions"
        );
        assert!(
            eq(&d1.extract(space.full_scope()).unwrap(), &d1),
            "extraction on every variable"
        );
    }
}

fn meet_distribution() {
    let mut rng = rng(2);
    for _ in 0..50 {
        let space = small_space(&mut rng);
        let d1 = testkit::random_generated(&mut rng, &space, 3);
        let d2 = testkit::random_generated(&mut rng, &space, 3);
        let s = testkit::random_scope(&mut rng, &space);
        let lhs = d1.meet(&d2).unwrap().extract(s).unwrap();
        let rhs = d1
            .extract(s)
            .unwrap()
            .meet(&d2.extract(s).unwrap())
            .unwrap();
        assert!(eq(&lhs, &rhs), "{d1:?} {d2:?} {s:?}");
    }
}

fn all_events(space: &Space) -> Vec<Vec<usize>> {
    let n = cells(space);
    (0u32..1 << n)
        .map(|mask| (0..n).filter(|i| mask & (1 << i) != 0).collect())
        .collect()
}

/// Cells agreeing on `s` with some member of `a`.
fn saturate(space: &Space, a: &[usize], s: Scope) -> Vec<usize> {
    let all = space.enumerate_cells(space.full_scope()).unwrap();
    let agree = |x: &[usize], y: &[usize]| s.indices().all(|v| x[v] == y[v]);
    (0..all.len())
        .filter(|&w| a.iter().any(|&m| agree(&all[w].0, &all[m].0)))
        .collect()
}

fn set_embedding() {
    for space in [Space::binary(&["X", "Y"]), Space::binary(&["X", "Y", "Z"])] {
        let events = all_events(&space);
        let embedded: Vec<ConePiece> = events
            .iter()
            .map(|a| EventSet::new(&space, a.iter().copied()).unwrap().embed())
            .collect();
        let scopes: Vec<Scope> = (0u64..1 << space.num_variables())
            .map(|m| Scope::from_indices((0..space.num_variables()).filter(|i| m & (1 << i) != 0)))
            .collect();
        for (a, da) in events.iter().zip(&embedded) {
            for (b, db) in events.iter().zip(&embedded) {
                let both: Vec<usize> = a.iter().copied().filter(|x| b.contains(x)).collect();
                let expected = EventSet::new(&space, both).unwrap().embed();
                assert!(eq(&da.combine(db).unwrap(), &expected), "{a:?} {b:?}");
            }
            for &s in &scopes {
                let expected = EventSet::new(&space, saturate(&space, a, s))
                    .unwrap()
                    .embed();
                assert!(eq(&da.extract(s).unwrap(), &expected), "{a:?} {s:?}");
            }
        }
    }
}

fn sigma_homomorphism() {
    let mut rng = rng(4);
    let mut pairs = 0;
    while pairs < 100 {
        let space = small_space(&mut rng);
        let d1 = testkit::random_coherent(&mut rng, &space, 2);
        let d2 = testkit::random_coherent(&mut rng, &space, 2);
        let d = d1.combine(&d2).unwrap();
        if d.is_contradiction() {
            continue;
        }
        pairs += 1;
        let lhs = LowerPrevision::sigma(&d).unwrap();
        let rhs = LowerPrevision::sigma(&d1)
            .unwrap()
            .combine(&LowerPrevision::sigma(&d2).unwrap())
            .unwrap();
        for _ in 0..50 {
            let f = testkit::random_gamble(&mut rng, &space, -3, 3);
            assert_eq!(lhs.lower(&f).unwrap(), rhs.lower(&f).unwrap());
        }
    }

    let space = Space::new([("X", ["w1", "w2"])]).unwrap();
    let d1 = ConePiece::from_assessments(&space, &[Gamble::from_ints(&space, &[1, -2]).unwrap()])
        .unwrap();
    let d2 = ConePiece::from_assessments(&space, &[Gamble::from_ints(&space, &[-1, 2]).unwrap()])
        .unwrap();
    assert!(d1.combine(&d2).unwrap().is_contradiction());
    let p = LowerPrevision::sigma(&d1)
        .unwrap()
        .combine(&LowerPrevision::sigma(&d2).unwrap())
        .unwrap();
    assert!(!p.is_null());
    assert_eq!(
        p.linear_mass().unwrap(),
        Some(vec![ratio(2, 3), ratio(1, 3)])
    );
}

fn lower_envelope() {
    let mut rng = rng(5);
    for _ in 0..50 {
        let space = small_space(&mut rng);
        let p = testkit::random_prevision(&mut rng, &space, 3);
        let gens: Vec<Vec<Rational>> = p
            .assessment()
            .unwrap()
            .into_iter()
            .map(Gamble::into_values)
            .collect();
        let vertices = oracle::credal_vertices(&gens, cells(&space));
        for _ in 0..100 {
            let f = testkit::random_gamble(&mut rng, &space, -4, 4);
            let expected = oracle::lower_envelope(&vertices, f.values()).unwrap();
            assert_eq!(p.lower(&f).unwrap().finite(), Some(&expected));
        }
    }
}

fn sandwich() {
    let mut rng = rng(6);
    for _ in 0..100 {
        let space = small_space(&mut rng);
        let d = testkit::random_coherent(&mut rng, &space, 3);
        let p = LowerPrevision::sigma(&d).unwrap();
        for _ in 0..30 {
            let f = testkit::random_gamble(&mut rng, &space, -3, 3);
            let inside = d.contains(&f).unwrap();
            assert!(!p.tau_strict_contains(&f).unwrap() || inside, "{f:?}");
            assert!(!inside || p.tau_bar_contains(&f).unwrap(), "{f:?}");
        }
    }
    let space = Space::new([("X", ["a", "b"])]).unwrap();
    let boundary =
        ConePiece::from_assessments(&space, &[Gamble::from_ints(&space, &[1, -2]).unwrap()])
            .unwrap();
    assert!(!boundary.is_strictly_desirable().unwrap());
}

fn random_content<R: Rng>(rng: &mut R, space: &Space, kind: ContentKind) -> Content {
    match kind {
        ContentKind::Cone => match rng.gen_range(0..6) {
            0 => ConePiece::vacuous(space).into(),
            1 => {
                let event =
                    EventSet::new(space, (0..cells(space)).filter(|_| rng.gen_bool(0.7))).unwrap();
                event
                    .embed()
                    .combine(&testkit::random_coherent(rng, space, 2))
                    .unwrap()
                    .into()
            }
            _ => testkit::random_coherent(rng, space, 3).into(),
        },
        ContentKind::Prevision => testkit::random_prevision(rng, space, 3).into(),
    }
}

fn random_global<R: Rng>(rng: &mut R, space: &Space, kind: ContentKind) -> GlobalLabeled {
    let support = testkit::random_scope(rng, space);
    let content = random_content(rng, space, kind).extract(support).unwrap();
    GlobalLabeled::new(content, support).unwrap()
}

fn labeled_isomorphism() {
    let mut rng = rng(7);
    for i in 0..100 {
        let kind = if i % 2 == 0 {
            ContentKind::Cone
        } else {
            ContentKind::Prevision
        };
        let space = small_space(&mut rng);
        let g1 = random_global(&mut rng, &space, kind);
        let g2 = random_global(&mut rng, &space, kind);
        assert!(
            h_inverse(&h(&g1).unwrap()).unwrap().equals(&g1).unwrap(),
            "roundtrip"
        );
        let combined = h(&g1.combine(&g2).unwrap()).unwrap();
        assert!(combined
            .equals(&h(&g1).unwrap().combine(&h(&g2).unwrap()).unwrap())
            .unwrap());
        let t = Scope::from_indices(g1.support().indices().filter(|_| rng.gen_bool(0.5)));
        let projected = h(&g1.project(t).unwrap()).unwrap();
        assert!(projected
            .equals(&h(&g1).unwrap().project(t).unwrap())
            .unwrap());
    }
}

fn window(start: usize, len: usize) -> Scope {
    Scope::from_indices(start..start + len)
}

/// Chains of overlapping windows, or leaves around a center, on up to four
/// binary variables. Four-variable globals carry one assessment only.
fn random_family<R: Rng>(rng: &mut R, kind: ContentKind) -> (LabeledPiece, Vec<Scope>) {
    let n = rng.gen_range(2..=4);
    let space = testkit::binary_space(n);
    let scopes = if rng.gen_bool(0.5) {
        let w = rng.gen_range(1..n);
        (0..=n - w).map(|i| window(i, w)).collect()
    } else {
        let mut scopes = vec![Scope::from_indices([n - 2, n - 1])];
        scopes.extend(
            (0..n - 1)
                .filter(|_| rng.gen_bool(0.6))
                .map(|i| Scope::from_indices([i])),
        );
        scopes.push(window(0, n - 1));
        scopes
    };
    let k = if n > 3 { 1 } else { 3 };
    let content: Content = match kind {
        ContentKind::Cone => testkit::random_coherent(rng, &space, k).into(),
        ContentKind::Prevision => testkit::random_prevision(rng, &space, k).into(),
    };
    (
        LabeledPiece::new(&space, space.full_scope(), content).unwrap(),
        scopes,
    )
}

fn rip_theorem() {
    let mut rng = rng(8);
    for i in 0..100 {
        let kind = if i % 2 == 0 {
            ContentKind::Cone
        } else {
            ContentKind::Prevision
        };
        let (global, scopes) = random_family(&mut rng, kind);
        let pieces: Vec<LabeledPiece> =
            scopes.iter().map(|&s| global.project(s).unwrap()).collect();
        let kb = KnowledgeBase::new(pieces).unwrap();
        let cert = satisfies_rip(&scopes).expect("chains and stars have the property");
        match rip_theorem_check(&kb, &cert).unwrap() {
            Verdict::Compatible(total) => {
                for p in kb.pieces() {
                    assert!(total.project(p.label()).unwrap().equals(p).unwrap());
                }
            }
            other => panic!("{other:?}"),
        }
        for (m, p) in join_tree_marginals(&kb, &cert)
            .unwrap()
            .iter()
            .zip(kb.pieces())
        {
            assert!(m.equals(p).unwrap());
        }
    }

    let space = Space::binary(&["X", "Y", "Z"]);
    let (half, zero) = (ratio(1, 2), int(0));
    let equal = vec![half.clone(), zero.clone(), zero.clone(), half.clone()];
    let differ = vec![zero.clone(), half.clone(), half, zero];
    let triple: Vec<LabeledPiece> = [
        (["X", "Y"], &equal),
        (["Y", "Z"], &equal),
        (["X", "Z"], &differ),
    ]
    .iter()
    .map(|(names, mass)| {
        let s = space.scope(names).unwrap();
        let sub = space.subspace(s).unwrap();
        LabeledPiece::new(
            &space,
            s,
            LowerPrevision::linear(&sub, mass).unwrap().into(),
        )
        .unwrap()
    })
    .collect();
    for a in &triple {
        for b in &triple {
            assert!(pairwise_compatible(a, b).unwrap());
        }
    }
    let kb = KnowledgeBase::new(triple).unwrap();
    assert!(!check_compatibility(&kb).unwrap().is_compatible());
}

/// Gaussian elimination on a square system, `None` when singular.
fn solve_square(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = a.len();
    let zero = int(0);
    for col in 0..n {
        let p = (col..n).find(|&r| a[r][col] != zero)?;
        a.swap(col, p);
        b.swap(col, p);
        for r in 0..n {
            if r != col && a[r][col] != zero {
                let f = &a[r][col] / &a[col][col];
                let pivot = a[col].clone();
                for (x, p) in a[r].iter_mut().zip(&pivot) {
                    *x -= &f * p;
                }
                let delta = &f * &b[col];
                b[r] -= delta;
            }
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Rows `(a, relation, b)` read as `a·x (<=|>=) b`.
type Row = (Vec<Rational>, Relation, Rational);

fn satisfied(rows: &[Row], x: &[Rational]) -> bool {
    rows.iter().all(|(a, rel, b)| {
        let v = dot(a, x);
        match rel {
            Relation::Le => v <= *b,
            Relation::Ge => v >= *b,
            Relation::Eq => v == *b,
        }
    })
}

/// The best objective value over all vertices of the polytope.
fn brute_force_optimum(dim: usize, rows: &[Row], objective: &[Rational]) -> Option<Rational> {
    let mut best: Option<Rational> = None;
    let mut subset = Vec::with_capacity(dim);
    fn walk(
        start: usize,
        dim: usize,
        rows: &[Row],
        objective: &[Rational],
        subset: &mut Vec<usize>,
        best: &mut Option<Rational>,
    ) {
        if subset.len() == dim {
            let a = subset.iter().map(|&i| rows[i].0.clone()).collect();
            let b = subset.iter().map(|&i| rows[i].2.clone()).collect();
            if let Some(x) = solve_square(a, b) {
                if satisfied(rows, &x) {
                    let v = dot(objective, &x);
                    if best.as_ref().is_none_or(|b| v > *b) {
                        *best = Some(v);
                    }
                }
            }
            return;
        }
        for i in start..rows.len() {
            subset.push(i);
            walk(i + 1, dim, rows, objective, subset, best);
            subset.pop();
        }
    }
    walk(0, dim, rows, objective, &mut subset, &mut best);
    best
}

fn lp_oracle() {
    let mut rng = rng(9);
    let mut feasible = 0;
    for _ in 0..500 {
        let dim = rng.gen_range(1..=4);
        let mut rows: Vec<Row> = Vec::new();
        for i in 0..dim {
            let mut e = vec![int(0); dim];
            e[i] = int(1);
            rows.push((e.clone(), Relation::Ge, int(0)));
            rows.push((e, Relation::Le, int(rng.gen_range(1..=4))));
        }
        for _ in 0..rng.gen_range(0..=4) {
            let a: Vec<Rational> = (0..dim).map(|_| int(rng.gen_range(-3..=3))).collect();
            let rel = if rng.gen_bool(0.5) {
                Relation::Le
            } else {
                Relation::Ge
            };
            rows.push((a, rel, int(rng.gen_range(-2..=4))));
        }
        let objective: Vec<Rational> = (0..dim).map(|_| int(rng.gen_range(-3..=3))).collect();
        let mut lp = LinearProgram::new(dim).maximize(objective.clone());
        for (a, rel, b) in &rows[2 * dim..] {
            lp.add_constraint(a.clone(), *rel, b.clone());
        }
        for (a, rel, b) in rows[..2 * dim].iter().skip(1).step_by(2) {
            lp.add_constraint(a.clone(), *rel, b.clone());
        }
        let expected = brute_force_optimum(dim, &rows, &objective);
        match (solve(&lp).unwrap(), expected) {
            (LpOutcome::Infeasible, None) => {}
            (LpOutcome::Optimal { value, witness }, Some(best)) => {
                assert!(satisfied(&rows, &witness));
                assert_eq!(dot(&objective, &witness), value);
                assert_eq!(value, best);
                feasible += 1;
            }
            (outcome, best) => panic!("solver {outcome:?}, brute force {best:?}"),
        }
    }
    assert!(feasible > 100, "only {feasible} feasible programs");
}

fn cli_determinism() {
    let model = Path::new(env!("CARGO_MANIFEST_DIR")).join("models/example.json");
    let run = |args: &[&str]| {
        let out = Command::new(env!("CARGO_BIN_EXE_ipalg"))
            .args(args)
            .arg("--model")
            .arg(&model)
            .output()
            .unwrap();
        assert_eq!(
            out.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        out.stdout
    };
    let first = run(&["run"]);
    assert_eq!(first, run(&["run"]), "reports differ");
    let report: serde_json::Value =
        serde_json::from_slice(&run(&["prevision", "P", r#"{"a": "1", "b": "0"}"#])).unwrap();
    assert_eq!(report["queries"][0]["result"], "1/2");
    let report: serde_json::Value =
        serde_json::from_slice(&run(&["check-coherence", "D"])).unwrap();
    assert_eq!(report["queries"][0]["result"], "coherent");
}

fn main() -> ExitCode {
    let criteria: [(&str, fn(), u64); 10] = [
        ("domain-free axiom suite", axiom_suite, 120),
        ("meet distribution", meet_distribution, 120),
        ("set-algebra embedding", set_embedding, 60),
        (
            "sigma homomorphism and boundary example",
            sigma_homomorphism,
            120,
        ),
        ("lower envelope theorem", lower_envelope, 180),
        ("sandwich and strict desirability", sandwich, 120),
        ("labeled isomorphism", labeled_isomorphism, 120),
        ("running intersection theorem", rip_theorem, 180),
        ("LP kernel oracle", lp_oracle, 120),
        ("CLI determinism", cli_determinism, 60),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check, budget)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check));
        let elapsed = start.elapsed();
        let budget = Duration::from_secs(budget);
        let verdict = match outcome {
            Ok(()) if elapsed <= budget => "PASS".to_string(),
            Ok(()) => "FAIL (over budget)".to_string(),
            Err(e) => {
                let message = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                format!("FAIL ({})", message.lines().next().unwrap_or(""))
            }
        };
        if !verdict.starts_with("PASS") {
            failed += 1;
        }
        println!(
            "criterion {:>2} {:<42} {:>8.2}s / {:>3}s  {verdict}",
            i + 1,
            name,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    if failed == 0 {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} criteria failed");
        ExitCode::FAILURE
    }
}
