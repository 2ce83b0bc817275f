//! Indicator profiles `χ_{S⁻¹h}` on finite windows of `G`, the shift action
//! on `{0,1}^G`, the clopen-image identity for profile compactifications,
//! the limit functional, and conjugacy to the one-point compactification.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::dynamics::{ActionInstance, ActionRule, Carrier, Point, Space};
use crate::equivalence::{verify_conjugacy, ConjugacyCertificate, GroupHom, PointMap};
use crate::error::{Error, Result};
use crate::group::{compose, invert, Family, GroupElement, OreContext, SemigroupId, WordBall, Q};
use crate::groupoid::q_contains;
use crate::report::{Check, Record, TriState};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    /// `χ_{S⁻¹h}`.
    Coset(GroupElement),
    /// `β_g` applied to another profile.
    Shifted { by: GroupElement, from: Box<Provenance> },
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Coset(h) => write!(f, "S^-1 {h}"),
            Provenance::Shifted { by, from } => write!(f, "beta_{by}({from})"),
        }
    }
}

/// A point of `{0,1}^G` known on a finite window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndicatorProfile {
    pub bits: BTreeMap<GroupElement, bool>,
    pub provenance: Provenance,
}

impl IndicatorProfile {
    pub fn window(&self) -> impl Iterator<Item = &GroupElement> {
        self.bits.keys()
    }

    pub fn bit(&self, k: &GroupElement) -> Option<bool> {
        self.bits.get(k).copied()
    }

    /// First common window element where the two profiles differ.
    pub fn disagreement(&self, other: &IndicatorProfile) -> Option<GroupElement> {
        self.bits
            .iter()
            .find(|(k, b)| other.bits.get(*k).is_some_and(|c| c != *b))
            .map(|(k, _)| k.clone())
    }

    pub fn common_len(&self, other: &IndicatorProfile) -> usize {
        self.bits.keys().filter(|k| other.bits.contains_key(*k)).count()
    }
}

/// `bits(k) = [k ∈ S⁻¹h] = [h·k⁻¹ ∈ S]` on `window`.
pub fn profile(s: &SemigroupId, h: &GroupElement, window: &[GroupElement]) -> Result<IndicatorProfile> {
    let mut bits = BTreeMap::new();
    for k in window {
        bits.insert(k.clone(), s.contains(&compose(h, &invert(k))?)?);
    }
    Ok(IndicatorProfile {
        bits,
        provenance: Provenance::Coset(h.clone()),
    })
}

/// `β_g(ξ)(k) = ξ(k g⁻¹)`, on the shifted window.
pub fn shift(g: &GroupElement, p: &IndicatorProfile) -> Result<IndicatorProfile> {
    let mut bits = BTreeMap::new();
    for (k, b) in &p.bits {
        bits.insert(compose(k, g)?, *b);
    }
    Ok(IndicatorProfile {
        bits,
        provenance: Provenance::Shifted {
            by: g.clone(),
            from: Box::new(p.provenance.clone()),
        },
    })
}

fn hypothesis(ctx: &OreContext, s: &SemigroupId, samples: &[GroupElement]) -> Result<Check> {
    let mut check = Check::new();
    for p in &ctx.generators {
        if ctx.in_semigroup(p)? {
            check.test(s.contains(p).unwrap_or(false), || format!("generator {p} of P is not in S"));
        }
    }
    for h in samples {
        for p in &ctx.generators {
            if !ctx.in_semigroup(p)? {
                continue;
            }
            let hp = compose(h, p)?;
            check.test(s.contains(&hp).unwrap_or(false), || format!("{h}·{p} = {hp} is not in S"));
        }
    }
    Ok(check)
}

/// `β_a(Ỹ) = {ξ ∈ Ỹ : ξ(a) = 1}` on sampled profiles `χ_{S⁻¹h}`, `h ∈ S`.
pub fn check_shift_images(
    ctx: &OreContext,
    s: &SemigroupId,
    a: &GroupElement,
    radius: usize,
    sample_count: usize,
) -> Result<Vec<Record>> {
    let anchor = "clopen images in profile compactifications";
    let window: Vec<GroupElement> = ctx.word_ball(radius)?.elements;
    let wide = ctx.word_ball(2 * radius)?;
    let in_s: Vec<GroupElement> = wide.iter().filter(|g| s.contains(g).unwrap_or(false)).cloned().collect();
    let stride = (in_s.len() / sample_count.max(1)).max(1);
    let samples: Vec<GroupElement> = in_s.iter().step_by(stride).take(sample_count.max(1)).cloned().collect();

    let hyp = hypothesis(ctx, s, &in_s)?;
    let hyp_rec = Record::from_check("P ⊆ S and SP ⊆ S", anchor, hyp.clone());
    if !hyp.ok() {
        return Ok(vec![hyp_rec, Record::new("beta_a(Y) = {xi in Y : xi(a) = 1}", anchor).undetermined(
            0,
            "hypothesis failed; claim not evaluated",
            0,
        )]);
    }
    if !ctx.in_semigroup(a)? {
        return Ok(vec![hyp_rec, Record::new("beta_a(Y) = {xi in Y : xi(a) = 1}", anchor).fail(
            format!("{a} is not in P"),
            1,
        )]);
    }

    let e = ctx.identity();
    let mut unit = Check::new();
    let mut fwd = Check::new();
    let mut bwd = Check::new();
    let mut undetermined = None;
    for h in &samples {
        let p = profile(s, h, &window)?;
        unit.test(p.bit(&e) == Some(true), || format!("chi_S^-1{h}(e) = 0"));

        // β_a(χ_{S⁻¹h}) = χ_{S⁻¹ha} is in Ỹ and has bit 1 at a
        let shifted = shift(a, &p)?;
        let ha = compose(h, a)?;
        let target = profile(s, &ha, &window)?;
        let bad = shifted.disagreement(&target);
        let ok = bad.is_none() && shifted.bit(a) == Some(true) && shifted.common_len(&target) > 0;
        fwd.test(ok, || match bad {
            Some(k) => format!("beta_{a}(chi_S^-1{h}) and chi_S^-1{ha} differ at {k}"),
            None => format!("beta_{a}(chi_S^-1{h}) has bit 0 at {a}"),
        });

        // a profile with bit 1 at a is β_a of some scanned profile
        if p.bit(a) == Some(true) {
            let mut found = false;
            for b in &in_s {
                let cand = shift(a, &profile(s, b, &window)?)?;
                if cand.common_len(&p) > 0 && cand.disagreement(&p).is_none() {
                    found = true;
                    break;
                }
            }
            if found {
                bwd.test(true, String::new);
            } else {
                undetermined = Some(2 * radius);
            }
        }
    }
    if let Some(bound) = undetermined {
        bwd.mark_undetermined(bound, "no preimage profile among the scanned elements of S");
    }
    Ok(vec![
        hyp_rec,
        Record::from_check("chi_S^-1h(e) = 1 for h in S", anchor, unit),
        Record::from_check("beta_a maps Y into {xi : xi(a) = 1}", anchor, fwd)
            .detail("window radius", radius)
            .detail("samples", samples.len()),
        Record::from_check("{xi in Y : xi(a) = 1} is contained in beta_a(Y)", anchor, bwd)
            .detail("scanned", in_s.len()),
    ])
}

/// The value `ξ` takes outside the inner half of the ball, if constant there.
pub fn limit_functional(xi: &dyn Fn(&GroupElement) -> Q, ball: &WordBall) -> Option<Q> {
    let cut = ball.radius / 2;
    let mut tail = ball.iter().filter(|g| ball.length(g).unwrap_or(0) > cut);
    let first = xi(tail.next()?);
    tail.all(|g| xi(g) == first).then_some(first)
}

/// `σ` on `P_∞` for the semigroup of `ctx`.
pub fn onepoint(ctx: &OreContext) -> Result<ActionInstance> {
    ActionInstance::new(
        format!("onepoint({})", ctx.semigroup),
        Space::OnePoint {
            carrier: Carrier::Semigroup(ctx.semigroup.clone()),
        },
        ctx.clone(),
        ActionRule::Sigma,
    )
}

/// Points of `rho`'s window whose `Q`-set looks like all of `G`.
fn full_isotropy_points(rho: &ActionInstance, window: &[Point], radius: usize) -> Result<Vec<Point>> {
    let ball = rho.ctx.word_ball(radius)?;
    let deep = rho.semigroup_elements(radius.max(window.len() + 1))?;
    let mut out = Vec::new();
    'points: for x in window {
        for g in ball.iter() {
            if !q_contains(rho, x, g)? {
                continue 'points;
            }
        }
        // b⁻¹ ∈ Q_x iff x ∈ θ_b(X)
        for b in &deep {
            if rho.preimage(b, x)?.is_none() {
                continue 'points;
            }
        }
        out.push(x.clone());
    }
    Ok(out)
}

fn range_gaps(rho: &ActionInstance, x0: &Point, window: &[Point], radius: usize) -> Result<BTreeSet<Point>> {
    let mut range = BTreeSet::new();
    for a in rho.semigroup_elements(radius)? {
        range.insert(rho.act(&a, x0)?);
    }
    Ok(window
        .iter()
        .filter(|p| rho.space.is_isolated(p) && !range.contains(*p))
        .cloned()
        .collect())
}

/// Builds `Λ(a) = ρ_a(x₀)`, `Λ(∞) = x_∞` and checks it is a conjugacy from `σ` on `P_∞` to `ρ`.
pub fn build_compactification_conjugacy(
    rho: &ActionInstance,
    x_inf: &Point,
    x0: &Point,
    radius: usize,
) -> Result<(Vec<Record>, Option<ConjugacyCertificate>)> {
    let anchor = "conjugacy to the one-point compactification";
    let sigma = onepoint(&rho.ctx)?;
    let mut out = Vec::new();

    let mut open = Check::new();
    for g in &rho.ctx.generators {
        if !rho.ctx.in_semigroup(g)? {
            continue;
        }
        let t = sigma.image_is_open(g)?;
        open.test(t.is_true(), || format!("P \\ P{g} is not finite"));
    }
    out.push(Record::from_check("P \\ Pa is finite for generators", anchor, open.clone()));

    let window = rho.default_window()?;
    let full = full_isotropy_points(rho, &window, radius)?;
    let unique = full.len() == 1 && full[0] == *x_inf;
    let witness = format!(
        "points with full Q-set: {}",
        full.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", ")
    );
    out.push(Record::from_tristate(
        "x_inf is the unique point with Q = G",
        anchor,
        TriState::from_bool(unique),
        true,
        Some(witness),
        window.len(),
    ));

    let p_elems = rho.semigroup_elements(radius)?;
    let mut inj = Check::new();
    let mut seen: BTreeMap<Point, GroupElement> = BTreeMap::new();
    for a in &p_elems {
        let y = rho.act(a, x0)?;
        let prev = seen.insert(y.clone(), a.clone());
        inj.test(prev.is_none(), || {
            format!("rho_{}(x0) = rho_{a}(x0) = {y}", prev.clone().unwrap_or_else(|| a.clone()))
        });
    }
    out.push(Record::from_check("a -> rho_a(x0) is injective", anchor, inj));

    // isolated points lie in every dense set: each missed one must be reached by some a ∈ P
    let gaps = range_gaps(rho, x0, &window, radius)?;
    let mut dense = Check::new();
    for y in &gaps {
        match rho.connecting_label(x0, y) {
            Ok(Some(g)) if rho.ctx.in_semigroup(&g)? && rho.act(&g, x0)? == *y => dense.test(true, String::new),
            Ok(_) => dense.test(false, || format!("{y} is isolated and not of the form rho_a(x0)")),
            Err(Error::Undetermined { bound, .. }) => {
                dense.mark_undetermined(bound, format!("no connecting label found for {y}"));
                true
            }
            Err(e) => return Err(e),
        };
    }
    dense.checked += window.len() - gaps.len();
    out.push(
        Record::from_check("range of a -> rho_a(x0) is dense", anchor, dense)
            .detail("missed at radius", gaps.len()),
    );

    let mut fixed = Check::new();
    for a in &p_elems {
        let y = rho.act(a, x_inf)?;
        fixed.test(&y == x_inf, || format!("rho_{a}(x_inf) = {y}"));
    }
    out.push(Record::from_check("rho_a(x_inf) = x_inf", anchor, fixed));

    let lambda = |m: &Point| -> Result<Point> {
        match m {
            Point::Elt(a) => rho.act(a, x0),
            _ => Ok(x_inf.clone()),
        }
    };
    let mut inter = Check::new();
    for a in &p_elems {
        for m in &p_elems {
            let lhs = rho.act(a, &lambda(&Point::Elt(m.clone()))?)?;
            let rhs = lambda(&sigma.act(a, &Point::Elt(m.clone()))?)?;
            inter.test(lhs == rhs, || format!("rho_{a}(Lambda({m})) = {lhs} but Lambda({m}{a}) = {rhs}"));
        }
    }
    out.push(Record::from_check("rho_a Lambda(m) = Lambda(sigma_a(m))", anchor, inter));

    // Q-sets grow along a ↦ ρ_a(x₀)
    let ball = rho.ctx.word_ball(radius)?;
    let mut chain = Check::new();
    if let Some(g) = rho.ctx.generators.iter().find(|g| rho.ctx.in_semigroup(g).unwrap_or(false)) {
        let mut prev = 0usize;
        let mut a = rho.ctx.identity();
        for _ in 0..=radius {
            let y = rho.act(&a, x0)?;
            let mut count = 0;
            for h in ball.iter() {
                if q_contains(rho, &y, h)? {
                    count += 1;
                }
            }
            chain.test(count >= prev, || format!("|Q ∩ ball| drops to {count} at rho_{a}(x0)"));
            prev = count;
            a = compose(&a, g)?;
        }
    }
    out.push(Record::from_check("Q-sets increase along the orbit of x0", anchor, chain));

    let hypotheses_ok = out.iter().all(|r| r.passed());
    if !hypotheses_ok {
        return Ok((out, None));
    }
    let cert = ConjugacyCertificate {
        phi: PointMap::Orbit {
            action: Box::new(rho.clone()),
            base: x0.clone(),
            fixed: x_inf.clone(),
        },
        alpha: GroupHom::Identity,
    };
    let samples = sigma.default_window()?;
    out.extend(verify_conjugacy(&cert, &sigma, rho, &samples, radius)?);
    Ok((out, Some(cert)))
}

/// `(ℤ, ℕ)` context, the setting of the profile examples.
pub fn integers_with_naturals() -> Result<OreContext> {
    OreContext::new(Family::IntAdditive, SemigroupId::NatAdditive, vec![GroupElement::Int(1)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Status;

    fn ints(r: std::ops::RangeInclusive<i64>) -> Vec<GroupElement> {
        r.map(GroupElement::Int).collect()
    }

    #[test]
    fn profile_of_three_over_naturals() {
        let p = profile(&SemigroupId::NatAdditive, &GroupElement::Int(3), &ints(-2..=5)).unwrap();
        for (k, b) in &p.bits {
            assert_eq!(*b, k.as_int().unwrap() <= 3, "{k}");
        }
        let d = profile(&SemigroupId::Trivial, &GroupElement::Int(0), &ints(-2..=2)).unwrap();
        assert_eq!(d.bits.values().filter(|b| **b).count(), 1);
        assert_eq!(d.bit(&GroupElement::Int(0)), Some(true));
    }

    #[test]
    fn shift_by_two_moves_the_coset() {
        let w = ints(-4..=8);
        let p = profile(&SemigroupId::NatAdditive, &GroupElement::Int(3), &w).unwrap();
        let s = shift(&GroupElement::Int(2), &p).unwrap();
        let q = profile(&SemigroupId::NatAdditive, &GroupElement::Int(5), &w).unwrap();
        assert!(s.common_len(&q) > 0);
        assert_eq!(s.disagreement(&q), None);
    }

    #[test]
    fn clopen_identity_for_naturals() {
        let ctx = integers_with_naturals().unwrap();
        for a in [0, 2] {
            for r in check_shift_images(&ctx, &SemigroupId::NatAdditive, &GroupElement::Int(a), 8, 10).unwrap() {
                assert_eq!(r.status, Status::Pass, "{r:?}");
            }
        }
    }

    #[test]
    fn limit_of_delta_and_alternating() {
        let ball = integers_with_naturals().unwrap().word_ball(5).unwrap();
        let delta = |g: &GroupElement| if g.is_identity() { Q::from_integer(1) } else { Q::from_integer(0) };
        assert_eq!(limit_functional(&delta, &ball), Some(Q::from_integer(0)));
        let alt = |g: &GroupElement| Q::from_integer(g.as_int().unwrap().rem_euclid(2));
        assert_eq!(limit_functional(&alt, &ball), None);
    }

    #[test]
    fn sigma_is_conjugate_to_itself() {
        let ctx = integers_with_naturals().unwrap();
        let sigma = onepoint(&ctx).unwrap();
        let (recs, cert) = build_compactification_conjugacy(&sigma, &Point::Infinity, &Point::Elt(GroupElement::Int(0)), 3).unwrap();
        for r in &recs {
            assert_eq!(r.status, Status::Pass, "{r:?}");
        }
        let cert = cert.unwrap();
        let p = Point::Elt(GroupElement::Int(4));
        assert_eq!(cert.phi.apply(&p).unwrap(), p);
    }
}
