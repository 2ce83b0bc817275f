//! Conjugacy, orbit equivalence and continuous orbit equivalence
//! certificates, and the two-way bridge between continuous-orbit-equivalence
//! certificates and groupoid isomorphisms.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_traits::{One, Pow};

use crate::dynamics::{ActionInstance, ActionRule, Carrier, Point, Space};
use crate::error::{Error, Result};
use crate::group::{compose, invert, Family, GroupElement, Q};
use crate::groupoid::{
    compose_arrows, is_topologically_free, orbit, orbit_contains, q_contains, transfer, transfer_opt, Arrow,
    TruncatedGroupoid,
};
use crate::report::{Check, Record, TriState};

/// A map between the points of two spaces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PointMap {
    Identity,
    Table(BTreeMap<Point, Point>),
    /// `a ↦ ρ_a(base)` on `P_∞`, with `∞ ↦ fixed`.
    Orbit {
        action: Box<ActionInstance>,
        base: Point,
        fixed: Point,
    },
}

impl PointMap {
    pub fn table(pairs: impl IntoIterator<Item = (Point, Point)>) -> PointMap {
        PointMap::Table(pairs.into_iter().collect())
    }

    pub fn apply(&self, x: &Point) -> Result<Point> {
        match self {
            PointMap::Identity => Ok(x.clone()),
            PointMap::Table(t) => t
                .get(x)
                .cloned()
                .ok_or_else(|| Error::Coverage(format!("{x} (no point-map entry)"))),
            PointMap::Orbit { action, base, fixed } => match x {
                Point::Infinity => Ok(fixed.clone()),
                Point::Elt(a) => action.act(a, base),
                other => Err(Error::NotInSpace(other.to_string())),
            },
        }
    }

    /// `φ⁻¹(y)`, or `None` when `y` is not in the range.
    pub fn apply_inverse(&self, y: &Point) -> Result<Option<Point>> {
        match self {
            PointMap::Identity => Ok(Some(y.clone())),
            PointMap::Table(t) => Ok(t.iter().find(|(_, v)| *v == y).map(|(k, _)| k.clone())),
            PointMap::Orbit { action, base, fixed } => {
                if y == fixed {
                    return Ok(Some(Point::Infinity));
                }
                let Some(a) = action.connecting_label(base, y)? else {
                    return Ok(None);
                };
                if action.ctx.in_semigroup(&a)? && &action.act(&a, base)? == y {
                    Ok(Some(Point::Elt(a)))
                } else {
                    Ok(None)
                }
            }
        }
    }

    pub fn inverse(&self) -> Option<PointMap> {
        match self {
            PointMap::Identity => Some(PointMap::Identity),
            PointMap::Table(t) => Some(PointMap::Table(t.iter().map(|(k, v)| (v.clone(), k.clone())).collect())),
            PointMap::Orbit { .. } => None,
        }
    }
}

impl fmt::Display for PointMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointMap::Identity => f.write_str("identity"),
            PointMap::Table(t) => write!(f, "table({} entries)", t.len()),
            PointMap::Orbit { base, fixed, .. } => write!(f, "a -> rho_a({base}), inf -> {fixed}"),
        }
    }
}

/// A group homomorphism given in closed form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupHom {
    Identity,
    /// `g ↦ g^c` (written additively: `n ↦ c·n`).
    Scale(i64),
    /// `n ↦ base^n`, from the integers to the positive rationals.
    Exp { base: i64 },
}

impl GroupHom {
    pub fn apply(&self, g: &GroupElement) -> Result<GroupElement> {
        use GroupElement::*;
        match (self, g) {
            (GroupHom::Identity, g) => Ok(g.clone()),
            (GroupHom::Scale(c), Int(n)) => Ok(Int(c * n)),
            (GroupHom::Scale(c), Cyclic { modulus, residue }) => GroupElement::cyclic(*modulus, c * *residue as i64),
            (GroupHom::Scale(c), PosRat(r)) => Ok(PosRat(Pow::pow(*r, *c as i32))),
            (GroupHom::Exp { base }, Int(n)) => Ok(PosRat(Pow::pow(Q::from_integer(*base), *n as i32))),
            (h, g) => Err(Error::Invalid(format!("{h} cannot be applied to {g}"))),
        }
    }

    /// The inverse homomorphism on `family`, if it is an automorphism there.
    pub fn inverse(&self, family: Family) -> Option<GroupHom> {
        match (self, family) {
            (GroupHom::Identity, _) => Some(GroupHom::Identity),
            (GroupHom::Scale(c), Family::FiniteCyclic(m)) => {
                let m = m as i64;
                (1..m.max(2)).find(|d| (c * d).rem_euclid(m) == 1 % m).map(GroupHom::Scale)
            }
            (GroupHom::Scale(c), _) if c.abs() == 1 => Some(GroupHom::Scale(*c)),
            _ => None,
        }
    }
}

impl fmt::Display for GroupHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupHom::Identity => f.write_str("identity"),
            GroupHom::Scale(c) => write!(f, "scale({c})"),
            GroupHom::Exp { base } => write!(f, "exp({base})"),
        }
    }
}

/// `φθ_m = ρ_{α(m)}φ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugacyCertificate {
    pub phi: PointMap,
    pub alpha: GroupHom,
}

/// A basic open set on which a cocycle entry is constant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BasicOpen {
    Whole,
    /// A finite set of isolated points.
    Points(Vec<Point>),
    /// Everything except finitely many isolated points; contains `∞`.
    Cofinite(Vec<Point>),
}

impl BasicOpen {
    pub fn contains(&self, x: &Point) -> bool {
        match self {
            BasicOpen::Whole => true,
            BasicOpen::Points(ps) => ps.contains(x),
            BasicOpen::Cofinite(ps) => !ps.contains(x),
        }
    }

    /// Whether the set is open in `space`; returns an offending point otherwise.
    pub fn open_in(&self, space: &Space) -> std::result::Result<(), String> {
        match self {
            BasicOpen::Whole => Ok(()),
            BasicOpen::Points(ps) => match ps.iter().find(|p| !space.is_isolated(p)) {
                Some(p) => Err(format!("{p} is not isolated")),
                None => Ok(()),
            },
            BasicOpen::Cofinite(ps) => {
                if matches!(space, Space::Rect) {
                    return Err("cofinite sets are not basic open in the rectangle".into());
                }
                match ps.iter().find(|p| !space.is_isolated(p)) {
                    Some(p) => Err(format!("removing {p} does not leave an open set")),
                    None => Ok(()),
                }
            }
        }
    }
}

impl fmt::Display for BasicOpen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |ps: &[Point]| ps.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(",");
        match self {
            BasicOpen::Whole => f.write_str("*"),
            BasicOpen::Points(ps) => write!(f, "{{{}}}", list(ps)),
            BasicOpen::Cofinite(ps) => write!(f, "~{{{}}}", list(ps)),
        }
    }
}

/// `a(x,g) = value` for `x ∈ domain`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CocycleEntry {
    pub domain: BasicOpen,
    pub label: GroupElement,
    pub value: GroupElement,
}

/// A locally constant map on arrows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cocycle {
    /// `a(x,g) = g`.
    Label,
    /// `a(x,g) = β(g)`.
    Hom(GroupHom),
    Table {
        entries: Vec<CocycleEntry>,
        fallback: Option<Box<Cocycle>>,
    },
}

impl Cocycle {
    pub fn eval(&self, x: &Point, g: &GroupElement) -> Result<GroupElement> {
        match self {
            Cocycle::Label => Ok(g.clone()),
            Cocycle::Hom(h) => h.apply(g),
            Cocycle::Table { entries, fallback } => {
                if let Some(e) = entries.iter().find(|e| &e.label == g && e.domain.contains(x)) {
                    return Ok(e.value.clone());
                }
                match fallback {
                    Some(f) => f.eval(x, g),
                    None => Err(Error::Coverage(format!("({x}, {g})"))),
                }
            }
        }
    }

    /// Local constancy: every table domain must be open.
    pub fn check_continuity(&self, space: &Space) -> Check {
        let mut check = Check::new();
        self.continuity_into(space, &mut check);
        check
    }

    fn continuity_into(&self, space: &Space, check: &mut Check) {
        match self {
            Cocycle::Label | Cocycle::Hom(_) => {
                check.test(true, String::new);
            }
            Cocycle::Table { entries, fallback } => {
                for e in entries {
                    let r = e.domain.open_in(space);
                    check.test(r.is_ok(), || {
                        format!("entry {} on {}: {}", e.label, e.domain, r.clone().unwrap_err())
                    });
                }
                if let Some(f) = fallback {
                    f.continuity_into(space, check);
                }
            }
        }
    }
}

/// `φ` with cocycles `a: X⋊P → H`, `b: Y⋊S → G`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoeCertificate {
    pub phi: PointMap,
    pub a: Cocycle,
    pub b: Cocycle,
}

impl CoeCertificate {
    pub fn identity() -> Self {
        CoeCertificate {
            phi: PointMap::Identity,
            a: Cocycle::Label,
            b: Cocycle::Label,
        }
    }

    /// `a(x,g) = β(g)`, `b(y,h) = β⁻¹(h)`.
    pub fn from_conjugacy(cert: &ConjugacyCertificate, family_b: Family) -> Result<Self> {
        let inv = cert
            .alpha
            .inverse(family_b)
            .ok_or_else(|| Error::Malformed(format!("{} has no closed-form inverse", cert.alpha)))?;
        Ok(CoeCertificate {
            phi: cert.phi.clone(),
            a: Cocycle::Hom(cert.alpha.clone()),
            b: Cocycle::Hom(inv),
        })
    }

    fn phi_inverse(&self) -> Result<PointMap> {
        self.phi
            .inverse()
            .ok_or_else(|| Error::Malformed("point map has no explicit inverse".into()))
    }
}

/// An arrow map `Y⋊S ← X⋊P`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ArrowMap {
    /// `Λ(x,g) = (φ(x), a(x,g))`.
    Cocycle { phi: PointMap, a: Cocycle },
    Table(HashMap<Arrow, Arrow>),
}

impl ArrowMap {
    pub fn apply(&self, p: &Arrow) -> Result<Arrow> {
        match self {
            ArrowMap::Cocycle { phi, a } => Ok(Arrow {
                base: phi.apply(&p.base)?,
                label: a.eval(&p.base, &p.label)?,
            }),
            ArrowMap::Table(t) => t.get(p).cloned().ok_or_else(|| Error::Coverage(p.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupoidIsoCertificate {
    pub forward: ArrowMap,
    pub backward: ArrowMap,
}

fn sample_points(a: &ActionInstance, samples: &[Point]) -> Vec<Point> {
    samples.iter().filter(|p| a.space.contains(p)).cloned().collect()
}

/// Checks a conjugacy certificate `φθ_m = ρ_{α(m)}φ` on samples and `P` ∩ ball.
pub fn verify_conjugacy(
    cert: &ConjugacyCertificate,
    a: &ActionInstance,
    b: &ActionInstance,
    samples: &[Point],
    radius: usize,
) -> Result<Vec<Record>> {
    let samples = sample_points(a, samples);
    let p_elems = a.semigroup_elements(radius)?;
    let s_elems = b.semigroup_elements(radius)?;
    let anchor = "conjugacy of injective actions";

    // φ bijective
    let mut bij = Check::new();
    let mut images: HashMap<Point, Point> = HashMap::new();
    for x in &samples {
        let y = match cert.phi.apply(x) {
            Ok(y) => y,
            Err(e) => {
                bij.fail(format!("φ({x}): {e}"));
                continue;
            }
        };
        bij.test(b.space.contains(&y), || format!("φ({x}) = {y} is not in the target space"));
        if let Some(prev) = images.insert(y.clone(), x.clone()) {
            bij.fail(format!("φ({prev}) = φ({x}) = {y}"));
        }
        let back = cert.phi.apply_inverse(&y)?;
        bij.test(back.as_ref() == Some(x), || format!("φ⁻¹(φ({x})) = {back:?}"));
    }
    if let Space::Finite { labels } = &b.space {
        for j in 0..labels.len() {
            let y = Point::Finite(j);
            bij.test(images.contains_key(&y), || format!("{y} is not in the range of φ"));
        }
    }

    // α: P → S is a semigroup isomorphism
    let mut alpha = Check::new();
    for m in &p_elems {
        match cert.alpha.apply(m) {
            Ok(am) => {
                let inside = b.ctx.in_semigroup(&am).unwrap_or(false);
                alpha.test(inside, || format!("α({m}) = {am} is not in the target semigroup"));
            }
            Err(e) => alpha.fail(format!("α({m}): {e}")),
        }
    }
    for m in &p_elems {
        for n in &p_elems {
            let mn = compose(m, n)?;
            let (Ok(lhs), Ok(am), Ok(an)) = (cert.alpha.apply(&mn), cert.alpha.apply(m), cert.alpha.apply(n)) else {
                continue;
            };
            let rhs = compose(&am, &an)?;
            alpha.test(lhs == rhs, || format!("α({m}·{n}) = {lhs} but α({m})α({n}) = {rhs}"));
        }
    }
    let inv = cert.alpha.inverse(b.ctx.family);
    for s in &s_elems {
        let pre = inv.as_ref().and_then(|h| h.apply(s).ok());
        let ok = match &pre {
            Some(m) => a.ctx.in_semigroup(m).unwrap_or(false) && cert.alpha.apply(m).ok().as_ref() == Some(s),
            None => false,
        };
        alpha.test(ok, || format!("{s} has no preimage under α in the source semigroup"));
    }

    // intertwining
    let mut inter = Check::new();
    for m in &p_elems {
        let Ok(am) = cert.alpha.apply(m) else { continue };
        if !b.ctx.in_semigroup(&am).unwrap_or(false) {
            continue;
        }
        for x in &samples {
            let Ok(phx) = cert.phi.apply(x) else { continue };
            let lhs = cert.phi.apply(&a.act(m, x)?);
            let rhs = b.act(&am, &phx);
            inter.test(lhs.is_ok() && lhs.as_ref().ok() == rhs.as_ref().ok(), || {
                format!("φ(θ_{m}({x})) = {lhs:?} but ρ_{am}(φ({x})) = {rhs:?}")
            });
        }
    }

    // β(g) = α(m)α(n)⁻¹ independent of the factorization
    let mut beta = Check::new();
    for g in a.ctx.word_ball(radius)?.iter() {
        let (m, n) = a.ctx.ore_decompose(g)?;
        let (Ok(am), Ok(an)) = (cert.alpha.apply(&m), cert.alpha.apply(&n)) else { continue };
        let canonical = compose(&am, &invert(&an))?;
        for n2 in &p_elems {
            let m2 = compose(g, n2)?;
            if !a.ctx.in_semigroup(&m2).unwrap_or(false) {
                continue;
            }
            let (Ok(am2), Ok(an2)) = (cert.alpha.apply(&m2), cert.alpha.apply(n2)) else { continue };
            let other = compose(&am2, &invert(&an2))?;
            beta.test(other == canonical, || {
                format!("β({g}) = {canonical} via ({m},{n}) but {other} via ({m2},{n2})")
            });
        }
    }

    let qrec = q_set_invariant(cert, a, b, &samples, radius)?;
    Ok(vec![
        Record::from_check("phi is a bijection", anchor, bij),
        Record::from_check("alpha is a semigroup isomorphism", anchor, alpha),
        Record::from_check("phi theta_m = rho_alpha(m) phi", anchor, inter),
        Record::from_check("beta is independent of the factorization", "induced group isomorphism", beta),
        qrec,
    ])
}

/// Conjugacy carries a point with `Q_x = P` to a point with `Q_{φ(x)} = S` (checked on the ball).
fn q_set_invariant(
    cert: &ConjugacyCertificate,
    a: &ActionInstance,
    b: &ActionInstance,
    samples: &[Point],
    radius: usize,
) -> Result<Record> {
    let ball_a = a.ctx.word_ball(radius)?;
    let ball_b = b.ctx.word_ball(radius)?;
    let mut check = Check::new();
    let mut full_points = 0;
    for x in samples {
        let mut q_is_p = true;
        for g in ball_a.iter() {
            if q_contains(a, x, g)? != a.ctx.in_semigroup(g).unwrap_or(false) {
                q_is_p = false;
                break;
            }
        }
        if !q_is_p {
            continue;
        }
        full_points += 1;
        let Ok(y) = cert.phi.apply(x) else { continue };
        for h in ball_b.iter() {
            let in_q = q_contains(b, &y, h)?;
            let in_s = b.ctx.in_semigroup(h).unwrap_or(false);
            check.test(in_q == in_s, || {
                if in_q {
                    format!("Q_{x} equals the source semigroup, but {h} ∈ Q_{y} lies outside the target semigroup")
                } else {
                    format!("Q_{x} equals the source semigroup, but {h} of the target semigroup is not in Q_{y}")
                }
            });
        }
    }
    Ok(
        Record::from_check("Q_x = P implies Q_phi(x) = S", "Q-sets are conjugacy invariants", check)
            .detail("points with Q_x = P on the ball", full_points),
    )
}

/// Checks `φ([x]) = [φ(x)]` on the window, both inclusions.
pub fn verify_orbit_equivalence(
    phi: &PointMap,
    a: &ActionInstance,
    b: &ActionInstance,
    window: &[Point],
    radius: usize,
) -> Result<Vec<Record>> {
    let mut fwd = Check::new();
    let mut bwd = Check::new();
    let mut undetermined = None;
    for x in window {
        let phx = phi.apply(x)?;
        for y in orbit(a, x, radius)? {
            let phy = phi.apply(&y)?;
            match orbit_contains(b, &phx, &phy)? {
                TriState::True => {
                    fwd.test(true, String::new);
                }
                TriState::False => fwd.fail(format!("x = {x}: φ({y}) = {phy} is not in the orbit of φ({x}) = {phx}")),
                TriState::Undetermined { bound } => undetermined = Some(bound),
            }
        }
        for z in orbit(b, &phx, radius)? {
            match phi.apply_inverse(&z)? {
                Some(w) => match orbit_contains(a, x, &w)? {
                    TriState::True => {
                        bwd.test(true, String::new);
                    }
                    TriState::False => {
                        bwd.fail(format!("x = {x}: φ⁻¹({z}) = {w} is not in the orbit of {x}"))
                    }
                    TriState::Undetermined { bound } => undetermined = Some(bound),
                },
                None => bwd.fail(format!("x = {x}: {z} is not in the range of φ")),
            }
        }
    }
    if let Some(bound) = undetermined {
        fwd.mark_undetermined(bound, "orbit membership search exhausted");
    }
    let anchor = "orbit equivalence";
    Ok(vec![
        Record::from_check("phi maps orbits into orbits", anchor, fwd).detail("radius", radius),
        Record::from_check("phi^-1 maps orbits into orbits", anchor, bwd).detail("radius", radius),
    ])
}

/// Checks the two transfer equations of a continuous-orbit-equivalence
/// certificate on the arrows of both truncations.
pub fn verify_coe(cert: &CoeCertificate, ta: &TruncatedGroupoid, tb: &TruncatedGroupoid) -> Result<Vec<Record>> {
    let (a, b) = (&ta.action, &tb.action);
    let phi_inv = cert.phi_inverse()?;
    let anchor = "continuous orbit equivalence";

    let mut bij = Check::new();
    let mut seen: HashMap<Point, Point> = HashMap::new();
    for x in ta.window.iter().chain(&ta.sources) {
        if seen.contains_key(x) {
            continue;
        }
        let Some(y) = soft(cert.phi.apply(x), &mut bij)? else { continue };
        if let Some((x2, _)) = seen.iter().find(|(_, v)| **v == y) {
            bij.fail(format!("φ({x}) = φ({x2}) = {y}"));
        } else {
            bij.test(phi_inv.apply(&y).ok().as_ref() == Some(x), || format!("φ⁻¹(φ({x})) ≠ {x}"));
        }
        seen.insert(x.clone(), y);
    }

    let mut eq1 = Check::new();
    for (i, p) in ta.arrows.iter().enumerate() {
        let Some(h) = soft(cert.a.eval(&p.base, &p.label), &mut eq1)? else { continue };
        let Some(phx) = soft(cert.phi.apply(&p.base), &mut eq1)? else { continue };
        let Some(lhs) = soft(cert.phi.apply(&ta.sources[i]), &mut eq1)? else { continue };
        let rhs = transfer_opt(b, &phx, &h)?;
        eq1.test(rhs.as_ref() == Some(&lhs), || {
            format!("φ(u({p})) = {lhs} but u(φ({}), {h}) = {}", p.base, shown(&rhs))
        });
    }

    let mut eq2 = Check::new();
    for (i, q) in tb.arrows.iter().enumerate() {
        let Some(g) = soft(cert.b.eval(&q.base, &q.label), &mut eq2)? else { continue };
        let Some(pre) = soft(phi_inv.apply(&q.base), &mut eq2)? else { continue };
        let Some(lhs) = soft(phi_inv.apply(&tb.sources[i]), &mut eq2)? else { continue };
        let rhs = transfer_opt(a, &pre, &g)?;
        eq2.test(rhs.as_ref() == Some(&lhs), || {
            format!("φ⁻¹(u({q})) = {lhs} but u(φ⁻¹({}), {g}) = {}", q.base, shown(&rhs))
        });
    }

    let ca = cert.a.check_continuity(&a.space);
    let cb = cert.b.check_continuity(&b.space);
    let mut cont = Check::new();
    cont.checked = ca.checked + cb.checked;
    cont.failure = ca.failure.or(cb.failure);

    Ok(vec![
        Record::from_check("phi is a bijection on the window", anchor, bij),
        Record::from_check("phi(u(x,g)) = u(phi(x), a(x,g))", anchor, eq1),
        Record::from_check("phi^-1(u(y,h)) = u(phi^-1(y), b(y,h))", anchor, eq2),
        Record::from_check("cocycles constant on basic open sets", "continuity of the cocycles", cont),
    ])
}

fn shown(p: &Option<Point>) -> String {
    p.as_ref().map_or("undefined".into(), |p| p.to_string())
}

/// Turns a missing table entry into a recorded failure.
fn soft<T>(r: Result<T>, check: &mut Check) -> Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(e @ (Error::Coverage(_) | Error::NotInSpace(_))) => {
            check.fail(e.to_string());
            Ok(None)
        }
        Err(e) => Err(e),
    }
}

/// Cocycle identities of a certificate, with topological freeness reported as a precondition.
pub fn cocycle_check(cert: &CoeCertificate, ta: &TruncatedGroupoid, tb: &TruncatedGroupoid) -> Result<Vec<Record>> {
    let (a, b) = (&ta.action, &tb.action);
    let phi_inv = cert.phi_inverse()?;
    let fa = is_topologically_free(a, ta.radius)?;
    let fb = is_topologically_free(b, tb.radius)?;
    let mut out = vec![
        fa.record(&a.name).detail("role", "precondition"),
        fb.record(&b.name).detail("role", "precondition"),
    ];

    let mut co_a = Check::new();
    for (i, j) in ta.composable_pairs() {
        let (p, q) = (&ta.arrows[i], &ta.arrows[j]);
        let Some(lhs) = soft(cert.a.eval(&p.base, &compose(&p.label, &q.label)?), &mut co_a)? else { continue };
        let Some(x) = soft(cert.a.eval(&p.base, &p.label), &mut co_a)? else { continue };
        let Some(y) = soft(cert.a.eval(&q.base, &q.label), &mut co_a)? else { continue };
        let rhs = compose(&x, &y)?;
        co_a.test(lhs == rhs, || format!("a at {p}·{q}: {lhs} ≠ a{p}·a{q} = {rhs}"));
    }
    let mut co_b = Check::new();
    for (i, j) in tb.composable_pairs() {
        let (p, q) = (&tb.arrows[i], &tb.arrows[j]);
        let Some(lhs) = soft(cert.b.eval(&p.base, &compose(&p.label, &q.label)?), &mut co_b)? else { continue };
        let Some(x) = soft(cert.b.eval(&p.base, &p.label), &mut co_b)? else { continue };
        let Some(y) = soft(cert.b.eval(&q.base, &q.label), &mut co_b)? else { continue };
        let rhs = compose(&x, &y)?;
        co_b.test(lhs == rhs, || format!("b at {p}·{q}: {lhs} ≠ b{p}·b{q} = {rhs}"));
    }

    let mut ba = Check::new();
    for p in &ta.arrows {
        let Some(h) = soft(cert.a.eval(&p.base, &p.label), &mut ba)? else { continue };
        let Some(phx) = soft(cert.phi.apply(&p.base), &mut ba)? else { continue };
        match cert.b.eval(&phx, &h) {
            Ok(g) => {
                ba.test(g == p.label, || format!("b(φ({}), a{p}) = {g} ≠ {}", p.base, p.label));
            }
            Err(e) => ba.fail(format!("b(φ({}), {h}): {e}", p.base)),
        }
    }
    let mut ab = Check::new();
    for q in &tb.arrows {
        let Some(g) = soft(cert.b.eval(&q.base, &q.label), &mut ab)? else { continue };
        let Some(pre) = soft(phi_inv.apply(&q.base), &mut ab)? else { continue };
        match cert.a.eval(&pre, &g) {
            Ok(h) => {
                ab.test(h == q.label, || format!("a(φ⁻¹({}), b{q}) = {h} ≠ {}", q.base, q.label));
            }
            Err(e) => ab.fail(format!("a(φ⁻¹({}), {g}): {e}", q.base)),
        }
    }
    let anchor = "cocycles of a continuous orbit equivalence";
    out.push(Record::from_check("a is a cocycle", anchor, co_a));
    out.push(Record::from_check("b is a cocycle", anchor, co_b));
    out.push(Record::from_check("b(phi(x), a(x,g)) = g", anchor, ba));
    out.push(Record::from_check("a(phi^-1(y), b(y,h)) = h", anchor, ab));
    Ok(out)
}

/// `Λ(x,g) = (φ(x), a(x,g))` and its inverse from `(φ⁻¹, b)`.
pub fn coe_to_groupoid_iso(cert: &CoeCertificate) -> Result<GroupoidIsoCertificate> {
    Ok(GroupoidIsoCertificate {
        forward: ArrowMap::Cocycle {
            phi: cert.phi.clone(),
            a: cert.a.clone(),
        },
        backward: ArrowMap::Cocycle {
            phi: cert.phi_inverse()?,
            a: cert.b.clone(),
        },
    })
}

/// Checks that `Λ` is a bijective homomorphism between the truncations.
pub fn verify_groupoid_iso(
    iso: &GroupoidIsoCertificate,
    ta: &TruncatedGroupoid,
    tb: &TruncatedGroupoid,
) -> Result<Vec<Record>> {
    let (a, b) = (&ta.action, &tb.action);
    let anchor = "isomorphism of etale groupoids";

    let mut valid = Check::new();
    let mut bij = Check::new();
    let mut images: HashMap<Arrow, Arrow> = HashMap::new();
    for p in &ta.arrows {
        let img = match iso.forward.apply(p) {
            Ok(i) => i,
            Err(e) => {
                bij.fail(format!("Λ{p}: {e}"));
                continue;
            }
        };
        let ok = b.space.contains(&img.base) && q_contains(b, &img.base, &img.label)?;
        valid.test(ok, || format!("Λ{p} = {img} is not an arrow"));
        if let Some(prev) = images.insert(img.clone(), p.clone()) {
            bij.fail(format!("Λ{prev} = Λ{p} = {img}"));
        }
        let back = iso.backward.apply(&img);
        bij.test(back.as_ref().ok() == Some(p), || format!("Λ⁻¹(Λ{p}) = {back:?}"));
    }
    for q in &tb.arrows {
        let pre = match iso.backward.apply(q) {
            Ok(i) => i,
            Err(e) => {
                bij.fail(format!("Λ⁻¹{q}: {e}"));
                continue;
            }
        };
        let ok = a.space.contains(&pre.base) && q_contains(a, &pre.base, &pre.label)?;
        valid.test(ok, || format!("Λ⁻¹{q} = {pre} is not an arrow"));
        let fwd = iso.forward.apply(&pre);
        bij.test(fwd.as_ref().ok() == Some(q), || format!("Λ(Λ⁻¹{q}) = {fwd:?}"));
    }

    let mut hom = Check::new();
    for (i, j) in ta.composable_pairs() {
        let (p, q) = (&ta.arrows[i], &ta.arrows[j]);
        let pq = compose_arrows(a, p, q)?;
        let (Ok(lp), Ok(lq), Ok(lpq)) = (iso.forward.apply(p), iso.forward.apply(q), iso.forward.apply(&pq)) else {
            hom.fail(format!("Λ undefined on {p}, {q} or their product"));
            continue;
        };
        let prod = compose_arrows(b, &lp, &lq);
        hom.test(prod.as_ref().ok() == Some(&lpq), || {
            format!("Λ({p}·{q}) = {lpq} but Λ{p}·Λ{q} = {prod:?}")
        });
    }

    let mut units = Check::new();
    let mut unit_images = BTreeSet::new();
    for x in &ta.window {
        match iso.forward.apply(&Arrow::unit(a, x.clone())) {
            Ok(u) => {
                units.test(u.is_unit(), || format!("Λ({x},e) = {u} is not a unit"));
                unit_images.insert(u.base);
            }
            Err(e) => units.fail(format!("Λ({x},e): {e}")),
        }
    }
    let target: BTreeSet<Point> = tb.window.iter().cloned().collect();
    units.test(unit_images == target, || {
        format!(
            "units map onto {} points but the target window has {}",
            unit_images.len(),
            target.len()
        )
    });

    Ok(vec![
        Record::from_check("Lambda maps arrows to arrows", anchor, valid),
        Record::from_check("Lambda is a bijection", anchor, bij),
        Record::from_check("Lambda is a homomorphism", anchor, hom),
        Record::from_check("Lambda restricts to a bijection of units", anchor, units),
    ])
}

/// Reads off `φ = Λ|units`, `a = cΛ`, `b = cΛ⁻¹` on the truncations.
pub fn groupoid_iso_to_coe(
    iso: &GroupoidIsoCertificate,
    ta: &TruncatedGroupoid,
    tb: &TruncatedGroupoid,
) -> Result<CoeCertificate> {
    let phi = unit_map(&iso.forward, ta)?;
    let phi_back = unit_map(&iso.backward, tb)?;
    for (x, y) in &phi {
        if phi_back.get(y) != Some(x) {
            return Err(Error::NotUnitPreserving(format!("units {x} and {y} do not correspond")));
        }
    }
    let a = read_off(&iso.forward, ta)?;
    let b = read_off(&iso.backward, tb)?;
    let phi = if phi.iter().all(|(x, y)| x == y) {
        PointMap::Identity
    } else {
        PointMap::Table(phi)
    };
    Ok(CoeCertificate { phi, a, b })
}

fn unit_map(m: &ArrowMap, t: &TruncatedGroupoid) -> Result<BTreeMap<Point, Point>> {
    let mut out = BTreeMap::new();
    for x in &t.window {
        let u = m.apply(&Arrow::unit(&t.action, x.clone()))?;
        if !u.is_unit() {
            return Err(Error::NotUnitPreserving(format!("({x},e) ↦ {u}")));
        }
        out.insert(x.clone(), u.base);
    }
    Ok(out)
}

/// `c∘Λ` as a table, compressed to `Label` or to base-independent entries when possible.
fn read_off(m: &ArrowMap, t: &TruncatedGroupoid) -> Result<Cocycle> {
    let mut values: BTreeMap<GroupElement, Vec<(Point, GroupElement)>> = BTreeMap::new();
    for p in &t.arrows {
        let img = m.apply(p)?;
        values.entry(p.label.clone()).or_default().push((p.base.clone(), img.label));
    }
    if values.iter().all(|(g, vs)| vs.iter().all(|(_, h)| h == g)) {
        return Ok(Cocycle::Label);
    }
    let mut entries = Vec::new();
    for (g, vs) in values {
        let first = vs[0].1.clone();
        if vs.iter().all(|(_, h)| *h == first) {
            entries.push(CocycleEntry {
                domain: BasicOpen::Whole,
                label: g,
                value: first,
            });
        } else {
            for (x, h) in vs {
                entries.push(CocycleEntry {
                    domain: BasicOpen::Points(vec![x]),
                    label: g.clone(),
                    value: h,
                });
            }
        }
    }
    Ok(Cocycle::Table {
        entries,
        fallback: None,
    })
}

/// Compares two certificates pointwise on the arrows of `ta` and `tb`.
pub fn certificates_agree(c1: &CoeCertificate, c2: &CoeCertificate, ta: &TruncatedGroupoid, tb: &TruncatedGroupoid) -> Result<Check> {
    let mut check = Check::new();
    for x in &ta.window {
        let (p, q) = (c1.phi.apply(x)?, c2.phi.apply(x)?);
        check.test(p == q, || format!("φ({x}): {p} vs {q}"));
    }
    for p in &ta.arrows {
        let (h1, h2) = (c1.a.eval(&p.base, &p.label)?, c2.a.eval(&p.base, &p.label)?);
        check.test(h1 == h2, || format!("a{p}: {h1} vs {h2}"));
    }
    for q in &tb.arrows {
        let (g1, g2) = (c1.b.eval(&q.base, &q.label)?, c2.b.eval(&q.base, &q.label)?);
        check.test(g1 == g2, || format!("b{q}: {g1} vs {g2}"));
    }
    Ok(check)
}

/// Outcome of the bounded search for a continuous orbit equivalence between
/// the additive and multiplicative actions on `ℕ*_∞`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObstructionScan {
    pub candidates: usize,
    pub unstable: usize,
    pub stabilized: usize,
    pub survivors: Vec<Vec<i64>>,
    /// `(candidate, ψ(1), powers checked, missing value)` for each stabilized candidate.
    pub stabilized_evidence: Vec<(Vec<i64>, Q, usize, i64)>,
    pub power_law: Check,
}

impl ObstructionScan {
    pub fn records(&self) -> Vec<Record> {
        let anchor = "no continuous orbit equivalence between the additive and multiplicative actions";
        let mut r = Record::new("no candidate homeomorphism survives", anchor);
        r = if self.survivors.is_empty() {
            r.pass(self.candidates)
        } else {
            r.fail(format!("survivor {:?}", self.survivors[0]), self.candidates)
        };
        r = r
            .detail("candidates", self.candidates)
            .detail("rejected: forced ratio not stabilized", self.unstable)
            .detail("rejected: stabilized but not onto", self.stabilized);
        if let Some((c, psi, n, miss)) = self.stabilized_evidence.first() {
            r = r.detail(
                "example",
                format!("phi = {c:?}: psi(1) = {psi}, psi(n) = psi(1)^n for n <= {n}, {miss} not in range"),
            );
        }
        let law = Record::from_check(
            "psi(n) = psi(1)^n on every stabilized candidate",
            anchor,
            self.power_law.clone(),
        )
        .detail("stabilized candidates", self.stabilized);
        vec![r, law]
    }
}

fn nat(p: &Point) -> Option<i64> {
    match p {
        Point::Nat(k) => Some(*k),
        _ => None,
    }
}

/// Bounded search for homeomorphisms `φ` of `ℕ*_∞` and locally constant
/// cocycles intertwining the additive action `a` with the multiplicative
/// action `b`.
///
/// Candidates are strictly increasing tables `{1..⌈B/2⌉} → {1..B}` and
/// geometric maps `k ↦ c·r^(k−1)` with `c ≤ B`, `2 ≤ r ≤ B`. Local constancy of
/// `a` at `(∞,g)` forces `ψ(g) = φ(k+g)/φ(k)` to be eventually independent of
/// `k`; candidates whose forced ratio varies on the tail are rejected, and
/// stabilized candidates satisfy `ψ(n) = ψ(1)^n`, which leaves gaps in the range.
pub fn coe_obstruction_scan(a: &ActionInstance, b: &ActionInstance, candidate_bound: usize) -> Result<ObstructionScan> {
    let pos = Space::OnePoint {
        carrier: Carrier::PositiveNaturals,
    };
    if a.rule != ActionRule::Shift || b.rule != ActionRule::Scale || a.space != pos || b.space != pos {
        return Err(Error::Invalid(
            "the obstruction scan compares the shift and scale actions on the positive naturals".into(),
        ));
    }
    let bound = candidate_bound.max(4) as i64;
    let n = ((bound + 1) / 2) as usize;
    let mut candidates: Vec<Vec<i64>> = Vec::new();
    increasing_tables(n, bound, &mut Vec::new(), &mut candidates);
    for c in 1..=bound {
        for r in 2..=bound {
            let mut v = Vec::with_capacity(n);
            let mut cur = c;
            for _ in 0..n {
                v.push(cur);
                cur = cur.saturating_mul(r);
            }
            candidates.push(v);
        }
    }

    let tail_start = n / 2;
    let mut scan = ObstructionScan {
        candidates: candidates.len(),
        unstable: 0,
        stabilized: 0,
        survivors: Vec::new(),
        stabilized_evidence: Vec::new(),
        power_law: Check::new(),
    };
    for phi in candidates {
        // forced a(k, g) = the b-label from φ(k) to φ(k+g), verified through both transfers
        let forced = |k: usize, g: i64| -> Result<Option<Q>> {
            let x = Point::Nat(k as i64 + 1);
            let ux = transfer(a, &x, &GroupElement::Int(g))?;
            let (px, pu) = (phi[k], phi[nat(&ux).unwrap_or(0) as usize - 1]);
            let label = b.connecting_label(&Point::Nat(px), &Point::Nat(pu))?;
            Ok(match label {
                Some(h) if transfer_opt(b, &Point::Nat(px), &h)? == Some(Point::Nat(pu)) => h.as_rat(),
                _ => None,
            })
        };
        let ratios: Vec<Option<Q>> = (tail_start..n - 1).map(|k| forced(k, 1)).collect::<Result<_>>()?;
        let psi1 = ratios[0];
        let stable = psi1.is_some() && ratios.iter().all(|r| *r == psi1);
        if !stable {
            scan.unstable += 1;
            continue;
        }
        let psi1 = psi1.unwrap_or_else(Q::one);
        scan.stabilized += 1;
        let mut powers = 0;
        for g in 1..(n - tail_start) as i64 {
            let k = tail_start;
            if k + g as usize >= n {
                break;
            }
            let psig = forced(k, g)?;
            let want = Pow::pow(psi1, g as i32);
            scan.power_law.test(psig == Some(want), || {
                format!("phi = {phi:?}: psi({g}) = {psig:?} but psi(1)^{g} = {want}")
            });
            powers += 1;
        }
        // an increasing φ with a geometric tail misses every integer strictly inside a tail gap
        let missing = (tail_start..n - 1).find_map(|k| ((phi[k] + 1)..phi[k + 1]).next());
        match missing {
            Some(v) => scan.stabilized_evidence.push((phi.clone(), psi1, powers, v)),
            None if psi1 == Q::one() => {
                scan.stabilized_evidence.push((phi.clone(), psi1, powers, 0));
            }
            None => scan.survivors.push(phi),
        }
    }
    Ok(scan)
}

fn increasing_tables(n: usize, max: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
    if cur.len() == n {
        out.push(cur.clone());
        return;
    }
    let start = cur.last().map_or(1, |v| v + 1);
    let room = (n - cur.len()) as i64;
    for v in start..=(max - room + 1) {
        cur.push(v);
        increasing_tables(n, max, cur, out);
        cur.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{OreContext, SemigroupId};
    use crate::groupoid::enumerate;
    use crate::report::Status;

    fn rot5() -> ActionInstance {
        let ctx = OreContext::new(
            Family::FiniteCyclic(5),
            SemigroupId::FullGroup,
            vec![GroupElement::cyclic(5, 1).unwrap()],
        )
        .unwrap();
        ActionInstance::new("rot5", Space::finite(5), ctx, ActionRule::Rotation).unwrap()
    }

    fn doubling() -> ConjugacyCertificate {
        ConjugacyCertificate {
            phi: PointMap::table((0..5).map(|i| (Point::Finite(i), Point::Finite(2 * i % 5)))),
            alpha: GroupHom::Scale(2),
        }
    }

    #[test]
    fn doubling_conjugates_rotation_to_itself() {
        let a = rot5();
        let w = a.default_window().unwrap();
        for r in verify_conjugacy(&doubling(), &a, &a, &w, 3).unwrap() {
            assert_eq!(r.status, Status::Pass, "{r:?}");
        }
        let bad = ConjugacyCertificate {
            phi: PointMap::Identity,
            alpha: GroupHom::Scale(2),
        };
        let recs = verify_conjugacy(&bad, &a, &a, &w, 3).unwrap();
        assert_eq!(recs[2].status, Status::Fail);
    }

    #[test]
    fn conjugacy_induced_coe_round_trip() {
        let a = rot5();
        let t = enumerate(&a, &a.default_window().unwrap(), 3).unwrap();
        let cert = CoeCertificate::from_conjugacy(&doubling(), a.ctx.family).unwrap();
        for r in verify_coe(&cert, &t, &t).unwrap().into_iter().chain(cocycle_check(&cert, &t, &t).unwrap()) {
            assert_eq!(r.status, Status::Pass, "{r:?}");
        }
        let iso = coe_to_groupoid_iso(&cert).unwrap();
        for r in verify_groupoid_iso(&iso, &t, &t).unwrap() {
            assert_eq!(r.status, Status::Pass, "{r:?}");
        }
        let back = groupoid_iso_to_coe(&iso, &t, &t).unwrap();
        assert!(certificates_agree(&cert, &back, &t, &t).unwrap().ok());
    }

    #[test]
    fn inverse_of_scale_mod_five() {
        assert_eq!(GroupHom::Scale(2).inverse(Family::FiniteCyclic(5)), Some(GroupHom::Scale(3)));
    }
}
