//! Acceptance criteria, one printed line per criterion.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use goid::calg::{self, compare, rep_indicator, run_all, Backend, CalgOptions};
use goid::catalog::{self, battery_window, build, coe_round_trip, run_battery, INSTANCES, PAIRS};
use goid::compactification::{check_shift_images, build_compactification_conjugacy, integers_with_naturals, limit_functional, onepoint};
use goid::dilation::check_reduction;
use goid::dynamics::{ActionInstance, Point};
use goid::equivalence::{
    coe_obstruction_scan, verify_coe, verify_conjugacy, verify_groupoid_iso, verify_orbit_equivalence, ArrowMap,
    Cocycle, CoeCertificate, ConjugacyCertificate, GroupHom, GroupoidIsoCertificate, PointMap,
};
use goid::group::{GroupElement, SemigroupId, Q};
use goid::groupoid::{enumerate, is_topologically_free, orbit, orbit_contains, q_contains};
use goid::report::{Check, Record, Status};
use goid::syntax;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn all_pass(recs: &[Record], what: &str) -> Result<(), String> {
    match recs.iter().find(|r| r.status != Status::Pass) {
        None => Ok(()),
        Some(r) => Err(format!("{what}: `{}` is {} ({:?})", r.claim, r.status, r.witness)),
    }
}

fn within(started: Instant, limit: Duration) -> Result<(), String> {
    let took = started.elapsed();
    ensure(took < limit, || format!("took {took:?}, limit {limit:?}"))
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn nat(k: i64) -> Point {
    Point::Nat(k)
}

/// Q-sets and orbits of the additive and multiplicative actions on the positive naturals.
fn c1() -> Outcome {
    let started = Instant::now();
    let radius = 8;
    let mut checked = 0usize;
    for name in ["add_nstar", "mult_nstar"] {
        let a = build(name).map_err(err)?;
        let window = a.default_window().map_err(err)?;
        let ball = a.ctx.word_ball(radius).map_err(err)?;
        for x in &window {
            for g in ball.iter() {
                let want = match (x, g) {
                    (Point::Infinity, _) => true,
                    (Point::Nat(k), GroupElement::Int(h)) => *h >= 1 - k,
                    (Point::Nat(k), GroupElement::PosRat(r)) => {
                        let v = *r * Q::from_integer(*k);
                        v.is_integer() && v > Q::from_integer(0)
                    }
                    _ => return Err(format!("unexpected pair {x}, {g}")),
                };
                let got = q_contains(&a, x, g).map_err(err)?;
                ensure(got == want, || format!("{name}: {g} ∈ Q_{x} is {got}"))?;
                checked += 1;
            }
            let orb: BTreeSet<Point> = orbit(&a, x, radius).map_err(err)?.into_iter().collect();
            if x.is_infinity() {
                ensure(orb == BTreeSet::from([Point::Infinity]), || format!("{name}: orbit of inf is {orb:?}"))?;
                continue;
            }
            let Point::Nat(k) = x else { unreachable!() };
            let want: BTreeSet<Point> = match name {
                "add_nstar" => ((k - radius as i64).max(1)..=k + radius as i64).map(nat).collect(),
                _ => ball
                    .iter()
                    .filter_map(|g| {
                        let v = g.as_rat()? * Q::from_integer(*k);
                        (v.is_integer() && v > Q::from_integer(0)).then(|| nat(v.to_integer()))
                    })
                    .collect(),
            };
            ensure(orb == want, || format!("{name}: orbit of {x} is {orb:?}"))?;
            for y in &window {
                if y.is_infinity() {
                    continue;
                }
                let t = orbit_contains(&a, x, y).map_err(err)?;
                ensure(t.is_true(), || format!("{name}: {y} not in the orbit of {x}"))?;
            }
        }
        let inf_in = orbit_contains(&a, &nat(1), &Point::Infinity).map_err(err)?;
        ensure(inf_in.is_false(), || format!("{name}: inf joined the finite orbit"))?;
    }
    within(started, Duration::from_secs(5))?;
    Ok(format!("{checked} memberships at radius {radius}"))
}

fn catalog_truncations() -> Result<Vec<goid::groupoid::TruncatedGroupoid>, String> {
    INSTANCES
        .iter()
        .map(|n| {
            let a = build(n).map_err(err)?;
            let w = battery_window(&a).map_err(err)?;
            enumerate(&a, &w, 3).map_err(err)
        })
        .collect()
}

/// Transfer is independent of the chosen decomposition.
fn c2() -> Outcome {
    let started = Instant::now();
    let mut arrows = 0;
    for t in catalog_truncations()? {
        let rec = t.check_decomposition_independence(4).map_err(err)?;
        all_pass(&[rec], &t.action.name)?;
        arrows += t.len();
    }
    within(started, Duration::from_secs(30))?;
    Ok(format!("{arrows} arrows"))
}

/// Groupoid axioms and the cocycle identity.
fn c3() -> Outcome {
    let mut pairs = 0;
    for t in catalog_truncations()? {
        all_pass(&t.check_axioms().map_err(err)?, &t.action.name)?;
        pairs += t.composable_pairs().len();
    }
    Ok(format!("{pairs} composable pairs"))
}

/// Openness of the generator images.
fn c4() -> Outcome {
    let mut n = 0;
    for name in ["add_nstar", "add_n", "rect_p1", "rect_p2", "mult_nstar", "mult_n"] {
        let a = build(name).map_err(err)?;
        for g in &a.ctx.generators {
            let got = a.image_is_open(g).map_err(err)?;
            let want = !name.contains("mult") || g.is_identity();
            ensure(got.is_true() == want && !matches!(got, goid::report::TriState::Undetermined { .. }), || {
                format!("{name}: openness of theta_{g} is {got}")
            })?;
            n += 1;
        }
    }
    Ok(format!("{n} generators"))
}

/// Reduction of the dilation to X'.
fn c5() -> Outcome {
    let mut n = 0;
    for name in ["add_nstar", "rot_finite(5)"] {
        let a = build(name).map_err(err)?;
        let t = enumerate(&a, &battery_window(&a).map_err(err)?, 3).map_err(err)?;
        all_pass(&check_reduction(&t).map_err(err)?, name)?;
        n += t.len();
    }
    Ok(format!("{n} arrows"))
}

fn doubling_on_rot5() -> Result<(ActionInstance, ConjugacyCertificate), String> {
    let a = build("rot_finite(5)").map_err(err)?;
    let phi = PointMap::table((0..5).map(|i| (Point::Finite(i), Point::Finite(2 * i % 5))));
    Ok((
        a,
        ConjugacyCertificate {
            phi,
            alpha: GroupHom::Scale(2),
        },
    ))
}

/// Certificate to groupoid isomorphism and back.
fn c6() -> Outcome {
    let (p1, p2) = (build("rect_p1").map_err(err)?, build("rect_p2").map_err(err)?);
    let id = CoeCertificate::identity();
    let (ta, tb) = catalog::pair_truncations(&p1, &p2, &id.phi, 2).map_err(err)?;
    let recs = coe_round_trip(&id, &ta, &tb).map_err(err)?;
    all_pass(&recs, "rectangle pair")?;

    let (rot, conj) = doubling_on_rot5()?;
    all_pass(
        &verify_conjugacy(&conj, &rot, &rot, &rot.default_window().map_err(err)?, 3).map_err(err)?,
        "doubling conjugacy",
    )?;
    let cert = CoeCertificate::from_conjugacy(&conj, rot.ctx.family).map_err(err)?;
    let (ta2, tb2) = catalog::pair_truncations(&rot, &rot, &cert.phi, 3).map_err(err)?;
    let recs2 = coe_round_trip(&cert, &ta2, &tb2).map_err(err)?;
    all_pass(&recs2, "doubling on rot_finite(5)")?;
    Ok(format!("{} + {} records", recs.len(), recs2.len()))
}

/// Continuously orbit equivalent but not conjugate.
fn c7() -> Outcome {
    let rep = run_battery("rect_pair", 2).map_err(err)?;
    all_pass(&rep.records, "rect_pair battery")?;
    let conj = rep.find("identity is a conjugacy").ok_or("missing conjugacy record")?;
    let observed = conj.details.iter().find(|(k, _)| k == "observed").map(|(_, v)| v.as_str());
    ensure(observed == Some("fail"), || format!("conjugacy observed {observed:?}"))?;
    let w = conj.witness.clone().unwrap_or_default();
    ensure(w.contains("Q_(0,1)") && w.contains("[[3/2,0],[0,1]]"), || format!("witness {w}"))?;
    let coe = rep.find("read-back certificate agrees with the input").ok_or("missing COE round trip")?;
    ensure(coe.status == Status::Pass, || "COE round trip".into())?;

    // the separating element: in Q_(0,1) = P1, outside P2; [[1/2,0]] lies in neither
    let p2 = build("rect_p2").map_err(err)?;
    let special = Point::rect(Q::from_integer(0), Q::from_integer(1));
    let sep = GroupElement::affine(Q::new(3, 2), Q::from_integer(0)).map_err(err)?;
    let half = GroupElement::affine(Q::new(1, 2), Q::from_integer(0)).map_err(err)?;
    ensure(q_contains(&p2, &special, &sep).map_err(err)? && !SemigroupId::P2Affine.contains(&sep).map_err(err)?, || {
        "[[3/2,0]] does not separate".into()
    })?;
    ensure(!q_contains(&p2, &special, &half).map_err(err)? && !SemigroupId::P2Affine.contains(&half).map_err(err)?, || {
        "[[1/2,0]] membership changed".into()
    })?;
    Ok("COE pass, conjugacy fail at Q_(0,1) via [[3/2,0],[0,1]]".into())
}

/// Orbit equivalence without continuous orbit equivalence, and its failure on the naturals.
fn c8() -> Outcome {
    let started = Instant::now();
    let (add, mult) = (build("add_nstar").map_err(err)?, build("mult_nstar").map_err(err)?);
    let window = add.default_window().map_err(err)?;
    all_pass(
        &verify_orbit_equivalence(&PointMap::Identity, &add, &mult, &window, 6).map_err(err)?,
        "identity orbit equivalence",
    )?;

    let scan = coe_obstruction_scan(&add, &mult, 12).map_err(err)?;
    ensure(scan.survivors.is_empty(), || format!("survivors {:?}", scan.survivors))?;
    ensure(scan.stabilized > 0 && scan.stabilized_evidence.len() == scan.stabilized, || {
        format!("{} stabilized, {} with evidence", scan.stabilized, scan.stabilized_evidence.len())
    })?;
    ensure(scan.power_law.ok() && scan.power_law.checked > 0, || format!("{:?}", scan.power_law.failure))?;
    ensure(scan.stabilized + scan.unstable == scan.candidates, || "scan does not partition candidates".into())?;

    let (add0, mult0) = (build("add_n").map_err(err)?, build("mult_n").map_err(err)?);
    let w0 = add0.default_window().map_err(err)?;
    let recs = verify_orbit_equivalence(&PointMap::Identity, &add0, &mult0, &w0, 6).map_err(err)?;
    let failed = recs.iter().find(|r| r.status == Status::Fail).ok_or("orbit equivalence on the naturals passed")?;
    let w = failed.witness.clone().unwrap_or_default();
    ensure(w.starts_with("x = 0"), || format!("witness {w}"))?;
    within(started, Duration::from_secs(60))?;
    Ok(format!(
        "{} candidates, {} stabilized and rejected, witness `{w}`",
        scan.candidates, scan.stabilized
    ))
}

/// Operator identities on finite truncations.
fn c9() -> Outcome {
    let started = Instant::now();
    let rot = build("rot_finite(5)").map_err(err)?;
    let t = enumerate(&rot, &rot.default_window().map_err(err)?, 5).map_err(err)?;
    ensure(t.is_exact(), || "rot_finite(5) truncation is not exact".into())?;
    let recs = run_all(&t, &CalgOptions::default(), Backend::Exact).map_err(err)?;
    all_pass(&recs, "rot_finite(5)")?;
    let span = recs.iter().any(|r| r.claim.contains("span dimension"));
    ensure(span, || "span-dimension record missing".into())?;

    let add = build("add_nstar").map_err(err)?;
    let w = add.window_of_size(20).map_err(err)?;
    let t2 = enumerate(&add, &w, 8).map_err(err)?;
    let opts = CalgOptions {
        margin: 4,
        ..CalgOptions::default()
    };
    let recs2 = run_all(&t2, &opts, Backend::Exact).map_err(err)?;
    all_pass(&recs2, "add_nstar")?;
    let corner = recs2.iter().find(|r| r.claim == "U pi(f) = pi~(f) U").ok_or("corner record missing")?;
    ensure(corner.checked > 0, || "corner identity checked nothing".into())?;
    within(started, Duration::from_secs(60))?;
    Ok(format!("{} + {} exact records", recs.len(), recs2.len()))
}

/// Profile compactifications and the one-point conjugacy.
fn c10() -> Outcome {
    let ctx = integers_with_naturals().map_err(err)?;
    let images = check_shift_images(&ctx, &SemigroupId::NatAdditive, &GroupElement::Int(1), 8, 8).map_err(err)?;
    all_pass(&images, "clopen identity")?;

    let add = build("add_nstar").map_err(err)?;
    let (recs, cert) = build_compactification_conjugacy(&add, &Point::Infinity, &nat(1), 6).map_err(err)?;
    all_pass(&recs, "one-point conjugacy builder")?;
    let cert = cert.ok_or("no certificate produced")?;
    let sigma = onepoint(&add.ctx).map_err(err)?;
    let samples = sigma.default_samples(0).map_err(err)?;
    all_pass(&verify_conjugacy(&cert, &sigma, &add, &samples, 6).map_err(err)?, "built certificate")?;

    let ball = ctx.word_ball(12).map_err(err)?;
    let e = ctx.identity();
    let lim = limit_functional(&|g| if *g == e { Q::from_integer(1) } else { Q::from_integer(0) }, &ball);
    ensure(lim == Some(Q::from_integer(0)), || format!("limit of delta_e is {lim:?}"))?;
    Ok(format!("{} + {} records, limit 0", images.len(), recs.len()))
}

fn expect_fail(recs: &[Record], what: &str) -> Result<String, String> {
    match recs.iter().find(|r| r.status == Status::Fail) {
        Some(r) if r.witness.as_deref().is_some_and(|w| !w.is_empty()) && r.checked > 0 => {
            Ok(r.witness.clone().unwrap_or_default())
        }
        Some(r) => Err(format!("{what}: failure without a witness ({:?})", r.claim)),
        None => Err(format!("{what}: corrupted input passed")),
    }
}

/// Corrupted inputs are rejected with witnesses; nothing passes vacuously.
fn c11() -> Outcome {
    let mut n = 0;
    let (rot, good) = doubling_on_rot5()?;
    let wrot = rot.default_window().map_err(err)?;

    // conjugacy with a mismatched homomorphism
    let bad = ConjugacyCertificate {
        phi: good.phi.clone(),
        alpha: GroupHom::Scale(3),
    };
    expect_fail(&verify_conjugacy(&bad, &rot, &rot, &wrot, 3).map_err(err)?, "conjugacy")?;
    n += 1;

    // orbit equivalence by a map that merges orbits
    let add0 = build("add_n").map_err(err)?;
    let mult0 = build("mult_n").map_err(err)?;
    let w0 = add0.default_window().map_err(err)?;
    expect_fail(&verify_orbit_equivalence(&PointMap::Identity, &add0, &mult0, &w0, 3).map_err(err)?, "orbit equivalence")?;
    n += 1;

    // continuous orbit equivalence with the wrong cocycle
    let cert = CoeCertificate {
        phi: PointMap::Identity,
        a: Cocycle::Hom(GroupHom::Scale(2)),
        b: Cocycle::Hom(GroupHom::Scale(3)),
    };
    let (ta, tb) = catalog::pair_truncations(&rot, &rot, &cert.phi, 3).map_err(err)?;
    expect_fail(&verify_coe(&cert, &ta, &tb).map_err(err)?, "coe")?;
    n += 1;

    // groupoid isomorphism with one arrow redirected
    let mut table = std::collections::HashMap::new();
    for p in &ta.arrows {
        table.insert(p.clone(), p.clone());
    }
    let first = ta.arrows[0].clone();
    let other = ta.arrows.iter().find(|p| p.base == first.base && p.label != first.label).cloned().ok_or("no arrow")?;
    table.insert(first, other);
    let iso = GroupoidIsoCertificate {
        forward: ArrowMap::Table(table.clone()),
        backward: ArrowMap::Table(table),
    };
    expect_fail(&verify_groupoid_iso(&iso, &ta, &tb).map_err(err)?, "groupoid iso")?;
    n += 1;

    // truncation with a corrupted source
    let mut t = ta.clone();
    t.sources.swap(0, 1);
    let i = t.sources.iter().zip(&ta.sources).position(|(x, y)| x != y);
    ensure(i.is_some(), || "swap did not change sources".into())?;
    expect_fail(&t.check_axioms().map_err(err)?, "groupoid axioms")?;
    expect_fail(&check_reduction(&t).map_err(err)?, "reduction")?;
    n += 2;

    // operator identity against a corrupted matrix
    let g = GroupElement::cyclic(5, 1).map_err(err)?;
    let u = rep_indicator(&ta, &g).map_err(err)?;
    let mut corrupted = u.clone();
    corrupted.set(0, 0, corrupted.get(0, 0) + Q::from_integer(1));
    let mut check = Check::new();
    compare(&ta, &[&u], &[&corrupted], Some(0), calg::DEFAULT_TOL, "u_1", &mut check);
    expect_fail(&[Record::from_check("corrupted matrix", "operators", check)], "matrix comparison")?;
    n += 1;

    // freeness fails on a non-free action
    let rint = build("rot_int(3)").map_err(err)?;
    expect_fail(&[is_topologically_free(&rint, 3).map_err(err)?.record("rot_int(3)")], "freeness")?;
    n += 1;

    // clopen identity with a semigroup that is not P-invariant
    let ctx = integers_with_naturals().map_err(err)?;
    expect_fail(&check_shift_images(&ctx, &SemigroupId::Trivial, &GroupElement::Int(1), 4, 4).map_err(err)?, "clopen identity")?;
    n += 1;

    // one-point conjugacy from a point that misses part of the space
    let add = build("add_nstar").map_err(err)?;
    let (recs, cert) = build_compactification_conjugacy(&add, &Point::Infinity, &nat(3), 6).map_err(err)?;
    expect_fail(&recs, "one-point conjugacy")?;
    ensure(cert.is_none(), || "certificate produced from a bad base point".into())?;
    n += 1;

    // spec loader: a non-injective table is rejected at load time
    let text = "[group]\nfamily = int\n[semigroup]\nid = nat\n[space]\nkind = finite\nsize = 3\n[action]\nrule = table\nmap = 1 : 1 1 0\n";
    match syntax::parse_spec_str(text) {
        Err(goid::Error::Axiom { witness, .. }) if !witness.is_empty() => n += 1,
        other => return Err(format!("non-injective table: {other:?}")),
    }

    // no record anywhere passes with zero checked instances
    for name in INSTANCES.iter().chain(PAIRS) {
        let rep = run_battery(name, 2).map_err(err)?;
        for r in &rep.records {
            ensure(r.status != Status::Pass || r.checked > 0, || format!("{name}: `{}` passed vacuously", r.claim))?;
        }
    }
    ensure(Record::new("empty", "none").pass(0).status == Status::Undetermined, || "empty pass".into())?;
    Ok(format!("{n} corrupted inputs rejected"))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("Q-sets and orbits on the positive naturals", c1),
        ("transfer independent of decomposition", c2),
        ("groupoid axioms and cocycle identity", c3),
        ("etale criterion per generator", c4),
        ("reduction of the dilation to X'", c5),
        ("certificate to groupoid isomorphism round trip", c6),
        ("rectangle pair: COE but not conjugate", c7),
        ("orbit equivalence without COE; naturals not orbit equivalent", c8),
        ("operator identities on truncations", c9),
        ("profile compactifications and one-point conjugacy", c10),
        ("negative controls", c11),
    ];
    let mut failures = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let outcome = f();
        let took = started.elapsed();
        match &outcome {
            Ok(note) => println!("criterion {:>2}: PASS  {name} ({note}; {took:.2?})", i + 1),
            Err(why) => {
                println!("criterion {:>2}: FAIL  {name}: {why} ({took:.2?})", i + 1);
                failures.push(i + 1);
            }
        }
    }
    if !failures.is_empty() {
        eprintln!("failed criteria: {failures:?}");
        std::process::exit(1);
    }
    println!("all {} criteria pass", criteria.len());
}
