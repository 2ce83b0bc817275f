//! Prebuilt instances and verification batteries with stored expectations.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::dilation::{check_intertwining, check_reduction};
use crate::dynamics::{ActionInstance, ActionRule, Carrier, Coord, Point, Space};
use crate::equivalence::{
    cocycle_check, coe_obstruction_scan, coe_to_groupoid_iso, groupoid_iso_to_coe, verify_coe, verify_conjugacy,
    verify_groupoid_iso, verify_orbit_equivalence, certificates_agree, CoeCertificate, ConjugacyCertificate, GroupHom,
    PointMap,
};
use crate::error::{Error, Result};
use crate::group::{compose, Family, GroupElement, OreContext, SemigroupId, Q};
use crate::groupoid::{enumerate, is_topologically_free, orbit, orbit_contains, q_contains, transfer_opt, TruncatedGroupoid};
use crate::report::{Check, Record, Report, Status, TriState};

pub const INSTANCES: &[&str] = &[
    "rect_p1",
    "rect_p2",
    "add_nstar",
    "mult_nstar",
    "add_n",
    "mult_n",
    "rot_finite(5)",
    "rot_int(3)",
    "onepoint(nat)",
    "onepoint(posint)",
];

pub const PAIRS: &[&str] = &["rect_pair", "pair_nstar", "pair_n"];

/// Generators of the multiplicative instances: the first four primes.
pub const MULT_GENERATORS: [i64; 4] = [2, 3, 5, 7];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    RectP1,
    RectP2,
    AddNStar,
    MultNStar,
    AddN,
    MultN,
    RotFinite(u32),
    RotInt(u32),
    OnePointNat,
    OnePointPosInt,
}

/// Where a stored expectation comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    /// Stated in the literature for this instance.
    Published,
    /// Immediate from the construction.
    Immediate,
    /// Regenerated by the named independent computation.
    Computed(&'static str),
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Origin::Published => f.write_str("published"),
            Origin::Immediate => f.write_str("immediate"),
            Origin::Computed(by) => write!(f, "computed ({by})"),
        }
    }
}

fn parse_arg<'a>(name: &'a str, head: &str) -> Option<&'a str> {
    name.strip_prefix(head)?.strip_prefix('(')?.strip_suffix(')')
}

pub fn kind(name: &str) -> Result<Kind> {
    let unknown = || Error::UnknownName(name.to_string());
    Ok(match name {
        "rect_p1" => Kind::RectP1,
        "rect_p2" => Kind::RectP2,
        "add_nstar" => Kind::AddNStar,
        "mult_nstar" => Kind::MultNStar,
        "add_n" => Kind::AddN,
        "mult_n" => Kind::MultN,
        "onepoint(nat)" => Kind::OnePointNat,
        "onepoint(posint)" => Kind::OnePointPosInt,
        _ => {
            if let Some(n) = parse_arg(name, "rot_finite") {
                Kind::RotFinite(n.trim().parse().ok().filter(|n| *n > 0).ok_or_else(unknown)?)
            } else if let Some(n) = parse_arg(name, "rot_int") {
                Kind::RotInt(n.trim().parse().ok().filter(|n| *n > 0).ok_or_else(unknown)?)
            } else {
                return Err(unknown());
            }
        }
    })
}

fn int_ctx() -> Result<OreContext> {
    OreContext::new(Family::IntAdditive, SemigroupId::NatAdditive, vec![GroupElement::Int(1)])
}

fn mult_ctx() -> Result<OreContext> {
    let gens = MULT_GENERATORS.iter().map(|p| GroupElement::PosRat(Q::from_integer(*p))).collect();
    OreContext::new(Family::PosRationalMult, SemigroupId::PosIntMult, gens)
}

fn affine_ctx(s: SemigroupId) -> Result<OreContext> {
    let gens = vec![
        GroupElement::affine(Q::from_integer(2), Q::zero())?,
        GroupElement::affine(Q::from_integer(3), Q::zero())?,
        GroupElement::affine(Q::one(), Q::one())?,
    ];
    OreContext::new(Family::AffineRational, s, gens)
}

pub fn build(name: &str) -> Result<ActionInstance> {
    let k = kind(name)?;
    let one_point = |carrier| Space::OnePoint { carrier };
    match k {
        Kind::RectP1 => ActionInstance::new(name, Space::Rect, affine_ctx(SemigroupId::P1Affine)?, ActionRule::Affine),
        Kind::RectP2 => ActionInstance::new(name, Space::Rect, affine_ctx(SemigroupId::P2Affine)?, ActionRule::Affine),
        Kind::AddNStar => ActionInstance::new(name, one_point(Carrier::PositiveNaturals), int_ctx()?, ActionRule::Shift),
        Kind::MultNStar => ActionInstance::new(name, one_point(Carrier::PositiveNaturals), mult_ctx()?, ActionRule::Scale),
        Kind::AddN => ActionInstance::new(name, one_point(Carrier::Naturals), int_ctx()?, ActionRule::Shift),
        Kind::MultN => ActionInstance::new(name, one_point(Carrier::Naturals), mult_ctx()?, ActionRule::Scale),
        Kind::RotFinite(n) => {
            let ctx = OreContext::new(Family::FiniteCyclic(n), SemigroupId::FullGroup, vec![GroupElement::cyclic(n, 1)?])?;
            ActionInstance::new(name, Space::finite(n as usize), ctx, ActionRule::Rotation)
        }
        Kind::RotInt(n) => ActionInstance::new(name, Space::finite(n as usize), int_ctx()?, ActionRule::Rotation),
        Kind::OnePointNat => {
            let ctx = int_ctx()?;
            ActionInstance::new(name, one_point(Carrier::Semigroup(ctx.semigroup.clone())), ctx, ActionRule::Sigma)
        }
        Kind::OnePointPosInt => {
            let ctx = mult_ctx()?;
            ActionInstance::new(name, one_point(Carrier::Semigroup(ctx.semigroup.clone())), ctx, ActionRule::Sigma)
        }
    }
}

/// Closed-form `Q_x` membership.
pub fn expected_q(k: Kind, x: &Point, g: &GroupElement) -> Option<bool> {
    let nat_in = |r: Q| r.is_integer() && r.is_positive();
    Some(match (k, x, g) {
        (_, Point::Infinity, _) => true,
        (Kind::AddNStar, Point::Nat(n), GroupElement::Int(h)) => *h >= 1 - n,
        (Kind::AddN, Point::Nat(n), GroupElement::Int(h)) => *h >= -n,
        (Kind::MultNStar | Kind::MultN, Point::Nat(0), _) => true,
        (Kind::MultNStar | Kind::MultN, Point::Nat(n), GroupElement::PosRat(r)) => nat_in(*r * Q::from_integer(*n)),
        (Kind::RectP1 | Kind::RectP2, Point::Rect { x, y }, GroupElement::Affine { a, b }) => {
            *a >= *y
                && match x {
                    Coord::NegInf => true,
                    Coord::Finite(x) => b >= x,
                }
        }
        (Kind::RotFinite(_) | Kind::RotInt(_), Point::Finite(_), _) => true,
        (Kind::OnePointNat, Point::Elt(b), g) => compose(b, g).ok()?.as_int()? >= 0,
        (Kind::OnePointPosInt, Point::Elt(b), g) => nat_in(compose(b, g).ok()?.as_rat()?),
        _ => return None,
    })
}

/// Closed-form transfer `u(x,g)` for `g ∈ Q_x`.
pub fn expected_transfer(k: Kind, x: &Point, g: &GroupElement) -> Option<Point> {
    if !expected_q(k, x, g)? {
        return None;
    }
    Some(match (k, x, g) {
        (Kind::RectP1 | Kind::RectP2, Point::Rect { x, y }, GroupElement::Affine { a, b }) => Point::Rect {
            x: match x {
                Coord::NegInf => Coord::NegInf,
                Coord::Finite(x) => Coord::Finite((*x - *b) / *a),
            },
            y: *y / *a,
        },
        (_, Point::Infinity, _) => Point::Infinity,
        (Kind::AddNStar | Kind::AddN, Point::Nat(n), GroupElement::Int(h)) => Point::Nat(n + h),
        (Kind::MultNStar | Kind::MultN, Point::Nat(n), GroupElement::PosRat(r)) => {
            Point::Nat((*r * Q::from_integer(*n)).to_integer())
        }
        (Kind::RotFinite(m), Point::Finite(i), GroupElement::Cyclic { residue, .. }) => {
            Point::Finite((*i + *residue as usize) % m as usize)
        }
        (Kind::RotInt(m), Point::Finite(i), GroupElement::Int(h)) => {
            Point::Finite((*i as i64 + h).rem_euclid(m as i64) as usize)
        }
        (Kind::OnePointNat | Kind::OnePointPosInt, Point::Elt(b), g) => Point::Elt(compose(b, g).ok()?),
        _ => return None,
    })
}

/// Closed-form orbit relation.
pub fn expected_same_orbit(k: Kind, x: &Point, y: &Point) -> Option<bool> {
    Some(match (x, y) {
        (Point::Infinity, _) | (_, Point::Infinity) => x == y,
        (Point::Nat(0), _) | (_, Point::Nat(0)) if k == Kind::MultN => x == y,
        (Point::Nat(_), Point::Nat(_)) | (Point::Finite(_), Point::Finite(_)) | (Point::Elt(_), Point::Elt(_)) => true,
        _ => return None,
    })
}

fn expected_free(k: Kind) -> (bool, Origin) {
    match k {
        Kind::RectP1 | Kind::RectP2 | Kind::AddNStar | Kind::MultNStar => (true, Origin::Published),
        Kind::MultN | Kind::RotInt(_) => (false, Origin::Immediate),
        _ => (true, Origin::Immediate),
    }
}

fn expected_open(k: Kind, g: &GroupElement) -> (bool, Origin) {
    match k {
        Kind::MultNStar | Kind::MultN => (g.is_identity(), Origin::Published),
        Kind::OnePointPosInt => (g.is_identity(), Origin::Immediate),
        Kind::RectP1 | Kind::RectP2 | Kind::AddNStar | Kind::AddN => (true, Origin::Published),
        _ => (true, Origin::Immediate),
    }
}

fn data_origin(k: Kind) -> Origin {
    match k {
        Kind::RectP1 | Kind::RectP2 | Kind::AddNStar | Kind::MultNStar => Origin::Published,
        _ => Origin::Immediate,
    }
}

/// Compares an observed record against a stored expected status.
pub fn expect(rec: Record, expected: Status, origin: Origin) -> Record {
    let observed = rec.status;
    let mut out = Record::new(rec.claim.clone(), rec.anchor.clone());
    out.checked = rec.checked;
    out.witness = rec.witness.clone();
    out.details = rec.details.clone();
    if observed == expected {
        out.status = Status::Pass;
        out.bound = None;
        if out.checked == 0 {
            out.checked = 1;
        }
    } else if observed == Status::Undetermined {
        out.status = Status::Undetermined;
        out.bound = rec.bound.or(Some(0));
    } else {
        out.status = Status::Fail;
        out.bound = None;
        out.witness = Some(format!(
            "expected {expected}, observed {observed}{}",
            rec.witness.map(|w| format!(": {w}")).unwrap_or_default()
        ));
    }
    out.detail("expected", expected).detail("observed", observed).detail("origin", origin)
}

/// Window used by the batteries: the default window, trimmed on the rectangle.
pub fn battery_window(a: &ActionInstance) -> Result<Vec<Point>> {
    let mut w = a.default_window()?;
    if a.space == Space::Rect {
        // the special point plus a spread of grid points
        let special = Point::rect(Q::zero(), Q::one());
        w.retain(|p| p != &special);
        let step = (w.len() / 8).max(1);
        w = w.into_iter().step_by(step).take(8).collect();
        w.push(special);
    }
    Ok(w)
}

fn q_table(a: &ActionInstance, k: Kind, window: &[Point], radius: usize) -> Result<Record> {
    let ball = a.ctx.word_ball(radius)?;
    let mut check = Check::new();
    for x in window {
        for g in ball.iter() {
            let Some(want) = expected_q(k, x, g) else { continue };
            let got = q_contains(a, x, g)?;
            check.test(got == want, || format!("{g} ∈ Q_{x}: computed {got}, closed form {want}"));
        }
    }
    Ok(Record::from_check("Q-sets match the closed form", "Q-sets of the instance", check).detail("radius", radius))
}

fn transfer_table(a: &ActionInstance, k: Kind, window: &[Point], radius: usize) -> Result<Record> {
    let ball = a.ctx.word_ball(radius)?;
    let mut check = Check::new();
    for x in window {
        for g in ball.iter() {
            let want = expected_transfer(k, x, g);
            let got = transfer_opt(a, x, g)?;
            check.test(got == want, || format!("u({x}, {g}): computed {got:?}, closed form {want:?}"));
        }
    }
    Ok(Record::from_check("transfer matches the closed form", "transfer map u(x,g)", check).detail("radius", radius))
}

fn orbit_tables(a: &ActionInstance, k: Kind, window: &[Point], radius: usize) -> Result<Vec<Record>> {
    let ball = a.ctx.word_ball(radius)?;
    let mut trunc = Check::new();
    let mut member = Check::new();
    for x in window {
        let got: BTreeSet<Point> = orbit(a, x, radius)?.into_iter().collect();
        let want: BTreeSet<Point> = ball.iter().filter_map(|g| expected_transfer(k, x, g)).collect();
        trunc.test(got == want, || {
            let extra: Vec<String> = got.symmetric_difference(&want).take(3).map(|p| p.to_string()).collect();
            format!("orbit of {x} at radius {radius} differs at {}", extra.join(", "))
        });
        for y in window {
            let Some(want) = expected_same_orbit(k, x, y) else { continue };
            match orbit_contains(a, x, y)? {
                TriState::Undetermined { bound } => member.mark_undetermined(bound, format!("{x} ~ {y}")),
                t => {
                    member.test(t.is_true() == want, || format!("{y} in the orbit of {x}: computed {t}, expected {want}"));
                }
            }
        }
    }
    Ok(vec![
        Record::from_check("orbit truncations match the closed form", "orbits of the instance", trunc),
        Record::from_check("orbit membership matches the closed form", "orbits of the instance", member),
    ])
}

/// Every stored expectation of one instance.
pub fn instance_records(name: &str, radius: usize) -> Result<Vec<Record>> {
    let k = kind(name)?;
    let a = build(name)?;
    let window = battery_window(&a)?;
    let data = data_origin(k);
    let mut out = Vec::new();

    let samples = a.default_samples(0)?;
    for r in a.action_axioms_report(&samples)? {
        out.push(expect(r, Status::Pass, Origin::Immediate));
    }
    for g in &a.ctx.generators {
        if !a.ctx.in_semigroup(g)? {
            continue;
        }
        let (want, origin) = expected_open(k, g);
        let got = a.image_is_open(g)?;
        let rec = Record::from_tristate(
            format!("theta_{g} has open image"),
            "etale criterion",
            got,
            want,
            Some(format!("computed {got}")),
            1,
        );
        out.push(rec.detail("expected", want).detail("origin", origin));
    }
    let (free, origin) = expected_free(k);
    let fr = is_topologically_free(&a, radius)?;
    out.push(expect(fr.record(name), if free { Status::Pass } else { Status::Fail }, origin));

    out.push(expect(q_table(&a, k, &window, radius)?, Status::Pass, data));
    out.push(expect(
        transfer_table(&a, k, &window, radius)?,
        Status::Pass,
        Origin::Computed("closed-form transfer"),
    ));
    if a.space != Space::Rect {
        for r in orbit_tables(&a, k, &window, radius)? {
            out.push(expect(r, Status::Pass, data));
        }
    }

    let t = enumerate(&a, &window, radius)?;
    for r in t.check_axioms()? {
        out.push(expect(r, Status::Pass, Origin::Immediate));
    }
    out.push(expect(
        t.check_decomposition_independence(radius + 1)?,
        Status::Pass,
        Origin::Computed("alternative factorizations"),
    ));
    for r in check_reduction(&t)? {
        out.push(expect(r, Status::Pass, Origin::Immediate));
    }
    if matches!(k, Kind::RotFinite(_) | Kind::RotInt(_)) {
        out.push(expect(check_intertwining(&a, &window, radius)?, Status::Pass, Origin::Immediate));
    }
    Ok(out)
}

/// Truncations of two actions over matching windows.
pub fn pair_truncations(
    a: &ActionInstance,
    b: &ActionInstance,
    phi: &PointMap,
    radius: usize,
) -> Result<(TruncatedGroupoid, TruncatedGroupoid)> {
    let wa = battery_window(a)?;
    let wb = wa.iter().map(|x| phi.apply(x)).collect::<Result<Vec<_>>>()?;
    Ok((enumerate(a, &wa, radius)?, enumerate(b, &wb, radius)?))
}

/// Verification, groupoid bridge and read-back of a continuous-orbit-equivalence certificate.
pub fn coe_round_trip(cert: &CoeCertificate, ta: &TruncatedGroupoid, tb: &TruncatedGroupoid) -> Result<Vec<Record>> {
    let mut out = verify_coe(cert, ta, tb)?;
    out.extend(cocycle_check(cert, ta, tb)?);
    let iso = coe_to_groupoid_iso(cert)?;
    out.extend(verify_groupoid_iso(&iso, ta, tb)?);
    let back = groupoid_iso_to_coe(&iso, ta, tb)?;
    out.extend(verify_coe(&back, ta, tb)?);
    out.push(Record::from_check(
        "read-back certificate agrees with the input",
        "continuous orbit equivalence and groupoid isomorphism",
        certificates_agree(cert, &back, ta, tb)?,
    ));
    Ok(out)
}

/// Sampled points whose `Q`-set equals the semigroup on the ball.
fn points_with_q_equal_p(a: &ActionInstance, points: &[Point], radius: usize) -> Result<(Vec<Point>, Check)> {
    let ball = a.ctx.word_ball(radius)?;
    let mut found = Vec::new();
    let mut check = Check::new();
    for x in points {
        let mut diff = None;
        for g in ball.iter() {
            if q_contains(a, x, g)? != a.ctx.in_semigroup(g).unwrap_or(false) {
                diff = Some(g.clone());
                break;
            }
        }
        match diff {
            Some(g) => {
                check.test(true, String::new);
                let _ = g;
            }
            None => {
                found.push(x.clone());
                check.fail(format!("Q_{x} equals the semigroup on the ball"));
            }
        }
    }
    Ok((found, check))
}

fn pair_records(name: &str, radius: usize) -> Result<Vec<Record>> {
    let mut out = Vec::new();
    match name {
        "rect_pair" => {
            let (a, b) = (build("rect_p1")?, build("rect_p2")?);
            let (ta, tb) = pair_truncations(&a, &b, &PointMap::Identity, radius)?;
            for r in coe_round_trip(&CoeCertificate::identity(), &ta, &tb)? {
                out.push(expect(r, Status::Pass, Origin::Published));
            }
            let special = Point::rect(Q::zero(), Q::one());
            let cert = ConjugacyCertificate {
                phi: PointMap::Identity,
                alpha: GroupHom::Identity,
            };
            let mut samples = vec![special.clone()];
            samples.extend(a.default_samples(0)?.into_iter().filter(|p| p != &special));
            let recs = verify_conjugacy(&cert, &a, &b, &samples, radius)?;
            let qrec = recs
                .iter()
                .find(|r| r.claim == "Q_x = P implies Q_phi(x) = S")
                .cloned()
                .ok_or_else(|| Error::CheckFailed("missing Q-set record".into()))?;
            let overall = recs.iter().map(|r| r.status).max().unwrap_or(Status::Undetermined);
            let mut conj = Record::new("identity is a conjugacy", "conjugacy of injective actions");
            conj.status = overall;
            conj.checked = recs.iter().map(|r| r.checked).sum();
            conj.witness = qrec.witness.clone();
            out.push(expect(conj, Status::Fail, Origin::Published));
            out.push(expect(qrec, Status::Fail, Origin::Published));

            // Q_(0,1) = P1 in both actions: [[3/2,0]] separates P1 from P2
            let ball = a.ctx.word_ball(radius)?;
            let mut q_is_p1 = Check::new();
            for inst in [&a, &b] {
                for g in ball.iter() {
                    let got = q_contains(inst, &special, g)?;
                    let want = SemigroupId::P1Affine.contains(g)?;
                    q_is_p1.test(got == want, || format!("{g} ∈ Q_(0,1) in {}: {got}", inst.name));
                }
            }
            out.push(expect(
                Record::from_check("Q_(0,1) = P1 in both actions", "Q-sets of the rectangle actions", q_is_p1),
                Status::Pass,
                Origin::Published,
            ));
            let sep = GroupElement::affine(Q::new(3, 2), Q::zero())?;
            let half = GroupElement::affine(Q::new(1, 2), Q::zero())?;
            let sep_ok = q_contains(&b, &special, &sep)? && !b.ctx.in_semigroup(&sep)?;
            out.push(
                expect(
                    Record::from_tristate(
                        "Q_(0,1) differs from P2",
                        "Q-sets of the rectangle actions",
                        TriState::from_bool(sep_ok),
                        true,
                        Some(format!("{sep} ∈ Q_(0,1), {sep} ∉ P2")),
                        1,
                    ),
                    Status::Pass,
                    Origin::Published,
                )
                .detail(
                    format!("{half}"),
                    format!(
                        "in Q_(0,1): {}, in P1: {}, in P2: {}",
                        q_contains(&b, &special, &half)?,
                        a.ctx.in_semigroup(&half)?,
                        b.ctx.in_semigroup(&half)?
                    ),
                ),
            );
            let bsamples = b.default_samples(0)?;
            let (found, check) = points_with_q_equal_p(&b, &bsamples, radius)?;
            let rec = Record::from_check("no sampled point of rect_p2 has Q-set P2", "Q-sets are conjugacy invariants", check)
                .detail("points with Q = P2", found.len());
            out.push(expect(rec, Status::Pass, Origin::Published));
        }
        "pair_nstar" => {
            let (a, b) = (build("add_nstar")?, build("mult_nstar")?);
            let window = a.default_window()?;
            for r in verify_orbit_equivalence(&PointMap::Identity, &a, &b, &window, radius)? {
                out.push(expect(r, Status::Pass, Origin::Published));
            }
            let scan = coe_obstruction_scan(&a, &b, 12)?;
            for r in scan.records() {
                out.push(expect(r, Status::Pass, Origin::Published));
            }
        }
        "pair_n" => {
            let (a, b) = (build("add_n")?, build("mult_n")?);
            let window = a.default_window()?;
            let recs = verify_orbit_equivalence(&PointMap::Identity, &a, &b, &window, radius)?;
            let overall = recs.iter().map(|r| r.status).max().unwrap_or(Status::Undetermined);
            let mut oe = Record::new("identity is an orbit equivalence", "orbit equivalence");
            oe.status = overall;
            oe.checked = recs.iter().map(|r| r.checked).sum();
            oe.witness = recs.iter().find_map(|r| r.witness.clone());
            out.push(expect(oe, Status::Fail, Origin::Published));

            let zero = Point::Nat(0);
            let (oa, ob) = (orbit(&a, &zero, radius)?, orbit(&b, &zero, radius)?);
            let ok = ob == vec![zero.clone()] && oa.len() > 1;
            out.push(expect(
                Record::from_tristate(
                    "0 has a singleton orbit only under the multiplicative action",
                    "orbits of the actions on the naturals",
                    TriState::from_bool(ok),
                    true,
                    Some(format!("additive orbit size {} at radius {radius}, multiplicative {}", oa.len(), ob.len())),
                    2,
                ),
                Status::Pass,
                Origin::Published,
            ));
        }
        other => return Err(Error::UnknownName(other.to_string())),
    }
    Ok(out)
}

/// Runs the stored expectations of an instance or pair and diffs them.
pub fn run_battery(name: &str, radius: usize) -> Result<Report> {
    let records = if PAIRS.contains(&name) {
        pair_records(name, radius)?
    } else {
        instance_records(name, radius)?
    };
    let mut rep = Report::new("battery", &[name.as_bytes(), &(radius as u64).to_le_bytes()]);
    rep.extend(records);
    Ok(rep)
}
