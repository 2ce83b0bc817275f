//! Library results against brute-force computations from the definitions.

use goid::calg::{rep_function, rep_indicator, Func};
use goid::catalog::{build, MULT_GENERATORS};
use goid::dilation::{canonicalize, equivalent};
use goid::dynamics::{ActionInstance, Point};
use goid::equivalence::coe_obstruction_scan;
use goid::group::{compose, invert, GroupElement, Q};
use goid::groupoid::{enumerate, transfer_opt};

/// `g ∈ Q_x` iff `θ_a(x) = θ_b(y)` for some `y` and some `a, b ∈ P` with `g = ab⁻¹`;
/// searched over explicit semigroup elements and candidate points.
fn brute_transfer(a: &ActionInstance, x: &Point, g: &GroupElement, pos: &[GroupElement], pts: &[Point]) -> Option<Point> {
    for p in pos {
        let r = compose(&invert(g), p).ok()?;
        if !pos.contains(&r) {
            continue;
        }
        let target = a.act(p, x).ok()?;
        for y in pts {
            if a.act(&r, y).ok()? == target {
                return Some(y.clone());
            }
        }
    }
    None
}

fn nat_points(lo: i64, hi: i64) -> Vec<Point> {
    let mut v: Vec<Point> = (lo..=hi).map(Point::Nat).collect();
    v.push(Point::Infinity);
    v
}

#[test]
fn additive_transfers_match_the_definition() {
    for name in ["add_nstar", "add_n"] {
        let a = build(name).unwrap();
        let lo = if name.ends_with("nstar") { 1 } else { 0 };
        let pos: Vec<GroupElement> = (0..=40).map(GroupElement::Int).collect();
        let pts = nat_points(lo, 60);
        for x in nat_points(lo, 12) {
            for g in -12..=12 {
                let g = GroupElement::Int(g);
                assert_eq!(transfer_opt(&a, &x, &g).unwrap(), brute_transfer(&a, &x, &g, &pos, &pts), "{name} {x} {g}");
            }
        }
    }
}

#[test]
fn multiplicative_transfers_match_the_definition() {
    let a = build("mult_nstar").unwrap();
    let mut pos = vec![Q::from_integer(1)];
    for p in MULT_GENERATORS {
        let mut next = pos.clone();
        for q in &pos {
            let mut v = *q;
            for _ in 0..3 {
                v *= Q::from_integer(p);
                next.push(v);
            }
        }
        pos = next;
    }
    let pos: Vec<GroupElement> = pos.into_iter().map(GroupElement::PosRat).collect();
    let pts = nat_points(1, 300);
    let labels = [(1, 1), (2, 1), (1, 2), (3, 2), (2, 3), (5, 6), (7, 4), (1, 35)];
    for x in nat_points(1, 24) {
        for (n, d) in labels {
            let g = GroupElement::PosRat(Q::new(n, d));
            assert_eq!(transfer_opt(&a, &x, &g).unwrap(), brute_transfer(&a, &x, &g, &pos, &pts), "{x} {g}");
        }
    }
}

#[test]
fn semigroup_compactification_transfers_match_the_definition() {
    let a = build("onepoint(nat)").unwrap();
    let pos: Vec<GroupElement> = (0..=30).map(GroupElement::Int).collect();
    let mut pts: Vec<Point> = pos.iter().cloned().map(Point::Elt).collect();
    pts.push(Point::Infinity);
    for b in 0..8 {
        let x = Point::Elt(GroupElement::Int(b));
        for g in -10..=10 {
            let g = GroupElement::Int(g);
            assert_eq!(transfer_opt(&a, &x, &g).unwrap(), brute_transfer(&a, &x, &g, &pos, &pts));
        }
    }
}

#[test]
fn indicator_matrices_are_label_shifts_on_the_full_rotation_groupoid() {
    let a = build("rot_finite(5)").unwrap();
    let t = enumerate(&a, &a.default_window().unwrap(), 5).unwrap();
    assert_eq!(t.len(), 25);
    for s in 0..5 {
        let g = GroupElement::cyclic(5, s).unwrap();
        let u = rep_indicator(&t, &g).unwrap();
        for (i, p) in t.arrows.iter().enumerate() {
            let (GroupElement::Cyclic { residue: k, .. }, Point::Finite(x)) = (&p.label, &p.base) else {
                panic!("unexpected arrow {p}");
            };
            let target = t
                .arrows
                .iter()
                .position(|q| q.base == Point::Finite(*x) && q.label == GroupElement::cyclic(5, (*k as i64 + s) % 5).unwrap())
                .unwrap();
            for j in 0..t.len() {
                let want = if j == target { Q::from_integer(1) } else { Q::from_integer(0) };
                assert_eq!(u.get(i, j), want, "u_{s} at ({p}, {})", t.arrows[j]);
            }
        }
    }
    // f acts on an arrow through its source x + k
    let f = Func::Table {
        values: (0..5).map(|i| (Point::Finite(i), Q::from_integer(i as i64 * i as i64))).collect(),
        default: Q::from_integer(0),
    };
    let m = rep_function(&t, &f).unwrap();
    for (i, p) in t.arrows.iter().enumerate() {
        let (GroupElement::Cyclic { residue: k, .. }, Point::Finite(x)) = (&p.label, &p.base) else { unreachable!() };
        let src = (x + *k as usize) % 5;
        assert_eq!(m.get(i, i), Q::from_integer((src * src) as i64));
    }
}

#[test]
fn canonical_dilation_classes_agree_with_the_relation() {
    let a = build("add_nstar").unwrap();
    let reps: Vec<(Point, GroupElement)> = (1..=6)
        .flat_map(|k| (-3..=3).map(move |g| (Point::Nat(k), GroupElement::Int(g))))
        .collect();
    for p in &reps {
        for q in &reps {
            // [x,a] = [θ_a(x), e], so (x,g) ~ (y,h) iff x + g = y + h on the positive naturals
            let (Point::Nat(x), GroupElement::Int(g)) = p else { unreachable!() };
            let (Point::Nat(y), GroupElement::Int(h)) = q else { unreachable!() };
            let want = x + g == y + h;
            assert_eq!(equivalent(&a, (&p.0, &p.1), (&q.0, &q.1)).unwrap().is_true(), want, "{p:?} {q:?}");
            let same = canonicalize(&a, &p.0, &p.1, 8).unwrap() == canonicalize(&a, &q.0, &q.1, 8).unwrap();
            assert_eq!(same, want, "{p:?} {q:?}");
        }
    }
}

#[test]
fn rejected_candidates_really_fail_to_be_bijections() {
    let add = build("add_nstar").unwrap();
    let mult = build("mult_nstar").unwrap();
    let scan = coe_obstruction_scan(&add, &mult, 12).unwrap();
    assert!(scan.survivors.is_empty());
    for (table, psi1, powers, missing) in &scan.stabilized_evidence {
        assert!(*powers > 0);
        assert!(!table.contains(missing), "{table:?} hits {missing}");
        assert!(*missing >= 1);
        // ψ(1) is the ratio of consecutive tail values
        let n = table.len();
        if n >= 2 && table[n - 2] != 0 {
            assert_eq!(Q::new(table[n - 1], table[n - 2]), *psi1, "{table:?}");
        }
    }
}
