//! Spaces, points and injective right actions `θ` of an Ore semigroup.

use std::collections::{HashMap, HashSet};
use std::fmt;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::group::{compose, invert, positive_elements, Family, GroupElement, OreContext, SemigroupId, Q};
use crate::report::{Check, Record, TriState};

/// First coordinate of a rectangle point: a rational or `−∞`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Coord {
    NegInf,
    Finite(Q),
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coord::NegInf => f.write_str("-inf"),
            Coord::Finite(q) => write!(f, "{q}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Point {
    /// Index into a finite space.
    Finite(usize),
    /// A natural number of `ℕ_∞` or `ℕ*_∞`.
    Nat(i64),
    /// A semigroup element of `P_∞`.
    Elt(GroupElement),
    Infinity,
    /// A point of `[−∞,0]×[0,1]`.
    Rect { x: Coord, y: Q },
}

impl Point {
    pub fn rect(x: Q, y: Q) -> Point {
        Point::Rect {
            x: Coord::Finite(x),
            y,
        }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, Point::Infinity)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Finite(i) => write!(f, "#{i}"),
            Point::Nat(k) => write!(f, "{k}"),
            Point::Elt(g) => write!(f, "<{g}>"),
            Point::Infinity => f.write_str("inf"),
            Point::Rect { x, y } => write!(f, "({x},{y})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Carrier {
    /// `ℕ = {0,1,2,…}`.
    Naturals,
    /// `ℕ* = {1,2,…}`.
    PositiveNaturals,
    /// The semigroup itself.
    Semigroup(SemigroupId),
}

impl Carrier {
    pub fn min_nat(&self) -> i64 {
        match self {
            Carrier::PositiveNaturals => 1,
            _ => 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Space {
    Finite { labels: Vec<String> },
    /// One-point compactification of a countable discrete carrier.
    OnePoint { carrier: Carrier },
    /// `[−∞,0]×[0,1]`.
    Rect,
}

impl Space {
    pub fn finite(n: usize) -> Space {
        Space::Finite {
            labels: (0..n).map(|i| i.to_string()).collect(),
        }
    }

    pub fn contains(&self, p: &Point) -> bool {
        match (self, p) {
            (Space::Finite { labels }, Point::Finite(i)) => *i < labels.len(),
            (Space::OnePoint { .. }, Point::Infinity) => true,
            (Space::OnePoint { carrier }, Point::Nat(k)) => match carrier {
                Carrier::Naturals => *k >= 0,
                Carrier::PositiveNaturals => *k >= 1,
                Carrier::Semigroup(_) => false,
            },
            (Space::OnePoint { carrier: Carrier::Semigroup(s) }, Point::Elt(g)) => {
                s.contains(g).unwrap_or(false)
            }
            (Space::Rect, Point::Rect { x, y }) => {
                let x_ok = match x {
                    Coord::NegInf => true,
                    Coord::Finite(x) => !x.is_positive(),
                };
                x_ok && !y.is_negative() && *y <= Q::one()
            }
            _ => false,
        }
    }

    /// Isolated points of the space: every finite point, or the carrier of a one-point space.
    pub fn is_isolated(&self, p: &Point) -> bool {
        match self {
            Space::Finite { .. } => true,
            Space::OnePoint { .. } => !p.is_infinity(),
            Space::Rect => false,
        }
    }

    pub fn size(&self) -> Option<usize> {
        match self {
            Space::Finite { labels } => Some(labels.len()),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ActionRule {
    /// `i ↦ i + g mod n` on a finite space of size `n`.
    Rotation,
    /// Explicit images of each generator; words act left to right.
    Table {
        generators: Vec<(GroupElement, Vec<usize>)>,
    },
    /// `k ↦ k + m` on `ℕ_∞` or `ℕ*_∞`.
    Shift,
    /// `k ↦ k·m` on `ℕ_∞` or `ℕ*_∞`.
    Scale,
    /// `σ_a(b) = b·a` on `P_∞`.
    Sigma,
    /// `θ_g(x,y) = ((x−b)/a, y/a)` on the rectangle.
    Affine,
}

impl ActionRule {
    pub fn name(&self) -> &'static str {
        match self {
            ActionRule::Rotation => "rotation",
            ActionRule::Table { .. } => "table",
            ActionRule::Shift => "shift",
            ActionRule::Scale => "scale",
            ActionRule::Sigma => "sigma",
            ActionRule::Affine => "affine",
        }
    }
}

/// A space with an injective right action of an Ore semigroup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionInstance {
    pub name: String,
    pub space: Space,
    pub ctx: OreContext,
    pub rule: ActionRule,
}

fn nat_of(p: &Point) -> Option<i64> {
    match p {
        Point::Nat(k) => Some(*k),
        _ => None,
    }
}

impl ActionInstance {
    pub fn new(name: impl Into<String>, space: Space, ctx: OreContext, rule: ActionRule) -> Result<Self> {
        let a = ActionInstance {
            name: name.into(),
            space,
            ctx,
            rule,
        };
        a.check_shape()?;
        Ok(a)
    }

    /// Structural compatibility of space, family and rule.
    pub fn check_shape(&self) -> Result<()> {
        self.ctx.validate()?;
        let fam = self.ctx.family;
        let bad = |msg: &str| Err(Error::Invalid(format!("{}: {msg}", self.rule.name())));
        match (&self.rule, &self.space) {
            (ActionRule::Rotation, Space::Finite { labels }) => match fam {
                Family::IntAdditive => Ok(()),
                Family::FiniteCyclic(m) if !labels.is_empty() && (m as usize).is_multiple_of(labels.len()) => Ok(()),
                _ => bad("rotation needs the integers or a cyclic group whose order the space size divides"),
            },
            (ActionRule::Table { generators }, Space::Finite { labels }) => {
                for (g, row) in generators {
                    if g.family() != fam {
                        return bad("table generator family differs from the group");
                    }
                    if row.len() != labels.len() || row.iter().any(|&i| i >= labels.len()) {
                        return bad(&format!("row for {g} is not a map of the space"));
                    }
                }
                if generators.is_empty() {
                    return bad("empty table");
                }
                Ok(())
            }
            (ActionRule::Shift, Space::OnePoint { carrier }) if fam == Family::IntAdditive => {
                if matches!(carrier, Carrier::Semigroup(_)) {
                    return bad("shift acts on the natural numbers");
                }
                Ok(())
            }
            (ActionRule::Scale, Space::OnePoint { carrier }) if fam == Family::PosRationalMult => {
                if matches!(carrier, Carrier::Semigroup(_)) {
                    return bad("scale acts on the natural numbers");
                }
                Ok(())
            }
            (ActionRule::Sigma, Space::OnePoint { carrier: Carrier::Semigroup(s) }) => {
                if *s != self.ctx.semigroup {
                    return bad("carrier semigroup differs from the acting semigroup");
                }
                Ok(())
            }
            (ActionRule::Affine, Space::Rect) if fam == Family::AffineRational => Ok(()),
            _ => bad("rule does not fit the space and group"),
        }
    }

    fn ensure_point(&self, x: &Point) -> Result<()> {
        if self.space.contains(x) {
            Ok(())
        } else {
            Err(Error::NotInSpace(x.to_string()))
        }
    }

    /// Permutation-style image table of `θ_a` on a finite space.
    fn table_map(&self, generators: &[(GroupElement, Vec<usize>)], a: &GroupElement) -> Result<Vec<usize>> {
        let n = self.space.size().unwrap_or(0);
        let id: Vec<usize> = (0..n).collect();
        if a.is_identity() {
            return Ok(id);
        }
        let mut seen: HashMap<GroupElement, Vec<usize>> = HashMap::new();
        seen.insert(self.ctx.identity(), id.clone());
        let mut frontier = vec![(self.ctx.identity(), id)];
        let bound = crate::group::max_ball_size();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for (w, map) in &frontier {
                for (s, row) in generators {
                    let ws = compose(w, s)?;
                    if seen.contains_key(&ws) {
                        continue;
                    }
                    let m: Vec<usize> = map.iter().map(|&i| row[i]).collect();
                    if &ws == a {
                        return Ok(m);
                    }
                    seen.insert(ws.clone(), m.clone());
                    next.push((ws, m));
                    if seen.len() > bound {
                        return Err(Error::ResourceCap {
                            what: format!("positive words reaching {a}"),
                            cap: bound,
                        });
                    }
                }
            }
            frontier = next;
        }
        Err(Error::NotInSemigroup(format!("{a} is not a product of the table generators")))
    }

    /// `θ_a(x)`.
    pub fn act(&self, a: &GroupElement, x: &Point) -> Result<Point> {
        self.ctx.ensure_in_semigroup(a)?;
        self.ensure_point(x)?;
        self.act_unchecked(a, x)
    }

    fn act_unchecked(&self, a: &GroupElement, x: &Point) -> Result<Point> {
        if let Point::Infinity = x {
            return Ok(Point::Infinity);
        }
        let out = match (&self.rule, x, a) {
            (ActionRule::Rotation, Point::Finite(i), g) => {
                let n = self.space.size().unwrap_or(1) as i64;
                let shift = match g {
                    GroupElement::Int(k) => *k,
                    GroupElement::Cyclic { residue, .. } => *residue as i64,
                    _ => return Err(Error::Invalid("rotation by a non-integer".into())),
                };
                Point::Finite((*i as i64 + shift).rem_euclid(n) as usize)
            }
            (ActionRule::Table { generators }, Point::Finite(i), a) => {
                Point::Finite(self.table_map(generators, a)?[*i])
            }
            (ActionRule::Shift, Point::Nat(k), GroupElement::Int(m)) => Point::Nat(
                k.checked_add(*m)
                    .ok_or_else(|| Error::Invalid("shift overflows".into()))?,
            ),
            (ActionRule::Scale, Point::Nat(k), GroupElement::PosRat(m)) => {
                if !m.is_integer() {
                    return Err(Error::NotInSemigroup(a.to_string()));
                }
                Point::Nat(
                    k.checked_mul(*m.numer())
                        .ok_or_else(|| Error::Invalid("scale overflows".into()))?,
                )
            }
            (ActionRule::Sigma, Point::Elt(b), a) => Point::Elt(compose(b, a)?),
            (ActionRule::Affine, Point::Rect { x, y }, GroupElement::Affine { a, b }) => {
                let nx = match x {
                    Coord::NegInf => Coord::NegInf,
                    Coord::Finite(x) => Coord::Finite((x - b) / a),
                };
                Point::Rect { x: nx, y: y / a }
            }
            _ => return Err(Error::NotInSpace(x.to_string())),
        };
        if !self.space.contains(&out) {
            return Err(Error::NotInSpace(format!("θ_{a}({x}) = {out} leaves the space")));
        }
        Ok(out)
    }

    /// The unique `x` with `θ_a(x) = y`, if any.
    pub fn preimage(&self, a: &GroupElement, y: &Point) -> Result<Option<Point>> {
        self.ctx.ensure_in_semigroup(a)?;
        if !self.space.contains(y) {
            return Ok(None);
        }
        if let Point::Infinity = y {
            return Ok(Some(Point::Infinity));
        }
        let x = match (&self.rule, y, a) {
            (ActionRule::Rotation, Point::Finite(_), _) | (ActionRule::Table { .. }, Point::Finite(_), _) => {
                let n = self.space.size().unwrap_or(0);
                for i in 0..n {
                    if self.act_unchecked(a, &Point::Finite(i))? == *y {
                        return Ok(Some(Point::Finite(i)));
                    }
                }
                return Ok(None);
            }
            (ActionRule::Shift, Point::Nat(l), GroupElement::Int(m)) => Point::Nat(l - m),
            (ActionRule::Scale, Point::Nat(l), GroupElement::PosRat(m)) => {
                let m = *m.numer();
                if l % m != 0 {
                    return Ok(None);
                }
                Point::Nat(l / m)
            }
            (ActionRule::Sigma, Point::Elt(b), a) => Point::Elt(compose(b, &invert(a))?),
            (ActionRule::Affine, Point::Rect { x, y }, GroupElement::Affine { a, b }) => {
                let px = match x {
                    Coord::NegInf => Coord::NegInf,
                    Coord::Finite(x) => Coord::Finite(a * x + b),
                };
                Point::Rect { x: px, y: a * y }
            }
            _ => return Ok(None),
        };
        Ok(if self.space.contains(&x) { Some(x) } else { None })
    }

    /// Whether `θ_a(X)` is open.
    pub fn image_is_open(&self, a: &GroupElement) -> Result<TriState> {
        self.ctx.ensure_in_semigroup(a)?;
        Ok(match &self.rule {
            ActionRule::Rotation | ActionRule::Table { .. } | ActionRule::Affine => TriState::True,
            ActionRule::Shift => TriState::True,
            ActionRule::Scale => TriState::from_bool(a.as_rat() == Some(Q::one())),
            ActionRule::Sigma => self.sigma_cofinite(a),
        })
    }

    /// `P∖Pa` finite, for the built-in semigroups; a bounded scan otherwise.
    fn sigma_cofinite(&self, a: &GroupElement) -> TriState {
        match &self.ctx.semigroup {
            SemigroupId::NatAdditive | SemigroupId::FullGroup | SemigroupId::Trivial => TriState::True,
            SemigroupId::PosIntMult => TriState::from_bool(a.is_identity()),
            SemigroupId::P1Affine | SemigroupId::P2Affine => TriState::from_bool(a.is_identity()),
            SemigroupId::Custom { bound, .. } => {
                if a.is_identity() {
                    TriState::True
                } else {
                    TriState::Undetermined { bound: *bound }
                }
            }
            SemigroupId::WithExtra { .. } => TriState::Undetermined { bound: 0 },
        }
    }

    /// Whether `θ_a` is onto.
    pub fn is_surjective(&self, a: &GroupElement) -> Result<TriState> {
        self.ctx.ensure_in_semigroup(a)?;
        Ok(match &self.rule {
            ActionRule::Rotation | ActionRule::Table { .. } => TriState::True,
            ActionRule::Shift => TriState::from_bool(a.as_int() == Some(0)),
            ActionRule::Scale | ActionRule::Affine => TriState::from_bool(a.is_identity()),
            ActionRule::Sigma => match &self.ctx.semigroup {
                SemigroupId::FullGroup | SemigroupId::Trivial => TriState::True,
                SemigroupId::Custom { bound, .. } if !a.is_identity() => TriState::Undetermined { bound: *bound },
                _ => TriState::from_bool(a.is_identity()),
            },
        })
    }

    /// Whether every `θ_m` is a homeomorphism of `X`.
    pub fn is_homeomorphism(&self) -> Result<TriState> {
        let mut t = TriState::True;
        for g in &self.ctx.generators {
            t = t.and(self.is_surjective(g)?);
        }
        Ok(t)
    }

    /// Elements of `P` in the word ball of `radius`, in canonical order.
    pub fn semigroup_elements(&self, radius: usize) -> Result<Vec<GroupElement>> {
        let ball = self.ctx.word_ball(radius)?;
        Ok(ball
            .iter()
            .filter(|g| self.ctx.in_semigroup(g).unwrap_or(false))
            .cloned()
            .collect())
    }

    /// Canonical finite window of base points.
    pub fn default_window(&self) -> Result<Vec<Point>> {
        self.window_of_size(20)
    }

    /// Like [`default_window`](Self::default_window) with `n` carrier points on one-point spaces.
    pub fn window_of_size(&self, n: usize) -> Result<Vec<Point>> {
        Ok(match &self.space {
            Space::Finite { labels } => (0..labels.len()).map(Point::Finite).collect(),
            Space::OnePoint { carrier } => {
                let mut w: Vec<Point> = match carrier {
                    Carrier::Semigroup(s) => {
                        let mut elts = positive_elements(&self.ctx.generators, self.ctx.family, n)?;
                        elts.retain(|g| s.contains(g).unwrap_or(false));
                        elts.sort();
                        elts.truncate(n);
                        elts.into_iter().map(Point::Elt).collect()
                    }
                    c => (0..n as i64).map(|k| Point::Nat(k + c.min_nat())).collect(),
                };
                w.push(Point::Infinity);
                w
            }
            Space::Rect => rect_grid(),
        })
    }

    /// Window points plus deterministic pseudo-random points.
    pub fn default_samples(&self, seed: u64) -> Result<Vec<Point>> {
        let mut out = self.default_window()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        match &self.space {
            Space::Finite { .. } => {}
            Space::OnePoint { carrier: Carrier::Semigroup(_) } => {}
            Space::OnePoint { carrier } => {
                for _ in 0..20 {
                    out.push(Point::Nat(rng.gen_range(carrier.min_nat()..500)));
                }
            }
            Space::Rect => {
                let base = [Point::rect(Q::from_integer(-1), Q::new(1, 2)), Point::rect(Q::zero(), Q::one())];
                for p in &base {
                    for a in self.semigroup_elements(2)? {
                        out.push(self.act(&a, p)?);
                    }
                }
                for _ in 0..20 {
                    let xd = rng.gen_range(1..=12);
                    let x = Q::new(-rng.gen_range(0..=4 * xd), xd);
                    let yd = rng.gen_range(1..=12);
                    let y = Q::new(rng.gen_range(0..=yd), yd);
                    out.push(Point::rect(x, y));
                }
                out.push(Point::Rect {
                    x: Coord::NegInf,
                    y: Q::new(1, 2),
                });
            }
        }
        let mut seen = HashSet::new();
        out.retain(|p| seen.insert(p.clone()));
        Ok(out)
    }

    /// A candidate `g` with `u(x,g) = y`, from the rule's closed form.
    ///
    /// `Ok(None)` means no such label exists. Finite table actions fall back to
    /// a word-ball search and report `Undetermined` when it is exhausted.
    pub fn connecting_label(&self, x: &Point, y: &Point) -> Result<Option<GroupElement>> {
        let e = self.ctx.identity();
        if x == y {
            return Ok(Some(e));
        }
        if x.is_infinity() || y.is_infinity() {
            return Ok(None);
        }
        Ok(match (&self.rule, x, y) {
            (ActionRule::Rotation, Point::Finite(i), Point::Finite(j)) => {
                let n = self.space.size().unwrap_or(1) as i64;
                let d = (*j as i64 - *i as i64).rem_euclid(n);
                Some(match self.ctx.family {
                    Family::FiniteCyclic(m) => GroupElement::cyclic(m, d)?,
                    _ => GroupElement::Int(d),
                })
            }
            (ActionRule::Shift, _, _) => {
                let (k, l) = (nat_of(x).unwrap_or(0), nat_of(y).unwrap_or(0));
                Some(GroupElement::Int(l - k))
            }
            (ActionRule::Scale, _, _) => {
                let (k, l) = (nat_of(x).unwrap_or(0), nat_of(y).unwrap_or(0));
                if k == 0 || l == 0 {
                    None
                } else {
                    Some(GroupElement::PosRat(Q::new(l, k)))
                }
            }
            (ActionRule::Sigma, Point::Elt(b), Point::Elt(c)) => Some(compose(&invert(b), c)?),
            (ActionRule::Affine, Point::Rect { x: x1, y: y1 }, Point::Rect { x: x2, y: y2 }) => {
                let a = if y2.is_zero() {
                    if !y1.is_zero() {
                        return Ok(None);
                    }
                    Q::one()
                } else {
                    if y1.is_zero() {
                        return Ok(None);
                    }
                    y1 / y2
                };
                let b = match (x1, x2) {
                    (Coord::NegInf, Coord::NegInf) => Q::zero(),
                    (Coord::Finite(p), Coord::Finite(q)) => p - a * q,
                    _ => return Ok(None),
                };
                Some(GroupElement::Affine { a, b })
            }
            (ActionRule::Table { .. }, Point::Finite(_), Point::Finite(_)) => {
                let n = self.space.size().unwrap_or(0);
                let radius = 2 * n + 2;
                let ball = self.ctx.word_ball(radius)?;
                for g in ball.iter() {
                    if let Some(u) = crate::groupoid::transfer_opt(self, x, g)? {
                        if &u == y {
                            return Ok(Some(g.clone()));
                        }
                    }
                }
                if ball.saturated {
                    None
                } else {
                    return Err(Error::Undetermined {
                        what: format!("label connecting {x} to {y}"),
                        bound: radius,
                    });
                }
            }
            _ => None,
        })
    }

    /// Checks the identity law, the right-action law and injectivity.
    pub fn action_axioms_report(&self, samples: &[Point]) -> Result<Vec<Record>> {
        let elements = self.semigroup_elements(2)?;
        let e = self.ctx.identity();

        let mut id = Check::new();
        for x in samples {
            let y = self.act(&e, x)?;
            id.test(&y == x, || format!("θ_e({x}) = {y}"));
        }

        let mut law = Check::new();
        for a in &elements {
            for b in &elements {
                let ba = compose(b, a)?;
                for x in samples {
                    let lhs = self.act(a, &self.act(b, x)?)?;
                    let rhs = self.act(&ba, x)?;
                    law.test(lhs == rhs, || {
                        format!("θ_{a}(θ_{b}({x})) = {lhs} but θ_{ba}({x}) = {rhs}")
                    });
                }
            }
        }

        let mut inj = Check::new();
        let exhaustive = matches!(self.space, Space::Finite { .. });
        for a in &elements {
            let mut images: HashMap<Point, Point> = HashMap::new();
            for x in samples {
                let y = self.act(a, x)?;
                if let Some(prev) = images.get(&y) {
                    inj.fail(format!("θ_{a}({prev}) = θ_{a}({x}) = {y}"));
                } else {
                    inj.test(true, String::new);
                    images.insert(y.clone(), x.clone());
                }
                if !exhaustive {
                    let back = self.preimage(a, &y)?;
                    inj.test(back.as_ref() == Some(x), || {
                        format!("preimage of θ_{a}({x}) = {y} is {back:?}")
                    });
                }
            }
        }
        let scope = if exhaustive { "exhaustive" } else { "sampled" };
        Ok(vec![
            Record::from_check("theta_e is the identity", "identity law of the action", id)
                .detail("scope", scope),
            Record::from_check(
                "theta_a theta_b = theta_{ba}",
                "right-action law",
                law,
            )
            .detail("scope", scope),
            Record::from_check("theta_a injective", "injectivity of the action maps", inj)
                .detail("scope", scope),
        ])
    }
}

/// Deterministic 40-point grid of the rectangle plus the corner `(0,1)`.
fn rect_grid() -> Vec<Point> {
    let xs = [Q::new(-1, 4), Q::new(-1, 2), Q::from_integer(-1), Q::from_integer(-2), Q::from_integer(-4)];
    let ys = [
        Q::new(1, 8),
        Q::new(1, 4),
        Q::new(1, 3),
        Q::new(1, 2),
        Q::new(2, 3),
        Q::new(3, 4),
        Q::new(7, 8),
        Q::one(),
    ];
    let mut out = Vec::new();
    for x in xs {
        for y in ys {
            out.push(Point::rect(x, y));
        }
    }
    out.push(Point::rect(Q::zero(), Q::one()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Status;

    fn rect_p1() -> ActionInstance {
        let gens = vec![
            GroupElement::Affine { a: Q::from_integer(2), b: Q::zero() },
            GroupElement::Affine { a: Q::one(), b: Q::one() },
        ];
        let ctx = OreContext::new(Family::AffineRational, SemigroupId::P1Affine, gens).unwrap();
        ActionInstance::new("rect", Space::Rect, ctx, ActionRule::Affine).unwrap()
    }

    fn shift_nat() -> ActionInstance {
        let ctx = OreContext::new(Family::IntAdditive, SemigroupId::NatAdditive, vec![GroupElement::Int(1)]).unwrap();
        ActionInstance::new(
            "shift",
            Space::OnePoint { carrier: Carrier::Naturals },
            ctx,
            ActionRule::Shift,
        )
        .unwrap()
    }

    #[test]
    fn act_examples() {
        let r = rect_p1();
        let g = GroupElement::Affine { a: Q::from_integer(2), b: Q::one() };
        let x = Point::rect(Q::from_integer(-1), Q::new(1, 2));
        let y = r.act(&g, &x).unwrap();
        assert_eq!(y, Point::rect(Q::from_integer(-1), Q::new(1, 4)));
        assert_eq!(r.preimage(&g, &y).unwrap(), Some(x));

        let s = shift_nat();
        assert_eq!(s.act(&GroupElement::Int(3), &Point::Nat(5)).unwrap(), Point::Nat(8));
        assert_eq!(s.act(&GroupElement::Int(3), &Point::Infinity).unwrap(), Point::Infinity);
        assert_eq!(s.preimage(&GroupElement::Int(3), &Point::Nat(1)).unwrap(), None);
        assert!(s.act(&GroupElement::Int(-1), &Point::Nat(5)).is_err());
    }

    #[test]
    fn finite_rotation_preimage() {
        let ctx = OreContext::new(Family::IntAdditive, SemigroupId::NatAdditive, vec![GroupElement::Int(1)]).unwrap();
        let a = ActionInstance::new("rot", Space::finite(3), ctx, ActionRule::Rotation).unwrap();
        assert_eq!(a.preimage(&GroupElement::Int(1), &Point::Finite(0)).unwrap(), Some(Point::Finite(2)));
    }

    #[test]
    fn openness_examples() {
        assert_eq!(shift_nat().image_is_open(&GroupElement::Int(2)).unwrap(), TriState::True);
        let ctx = OreContext::new(
            Family::PosRationalMult,
            SemigroupId::PosIntMult,
            vec![GroupElement::PosRat(Q::from_integer(2))],
        )
        .unwrap();
        let m = ActionInstance::new(
            "scale",
            Space::OnePoint { carrier: Carrier::PositiveNaturals },
            ctx,
            ActionRule::Scale,
        )
        .unwrap();
        assert_eq!(m.image_is_open(&GroupElement::PosRat(Q::from_integer(2))).unwrap(), TriState::False);
        assert_eq!(
            rect_p1()
                .image_is_open(&GroupElement::Affine { a: Q::new(3, 2), b: Q::new(1, 3) })
                .unwrap(),
            TriState::True
        );
    }

    #[test]
    fn axioms_pass_on_rect_samples() {
        let r = rect_p1();
        let samples = r.default_samples(0).unwrap();
        assert!(samples.len() >= 50);
        for rec in r.action_axioms_report(&samples).unwrap() {
            assert_eq!(rec.status, Status::Pass, "{rec:?}");
        }
    }

    #[test]
    fn corrupted_table_fails_injectivity() {
        let ctx = OreContext::new(Family::IntAdditive, SemigroupId::NatAdditive, vec![GroupElement::Int(1)]).unwrap();
        let a = ActionInstance::new(
            "bad",
            Space::finite(3),
            ctx,
            ActionRule::Table {
                generators: vec![(GroupElement::Int(1), vec![1, 1, 0])],
            },
        )
        .unwrap();
        let w = a.default_window().unwrap();
        let recs = a.action_axioms_report(&w).unwrap();
        assert_eq!(recs[2].status, Status::Fail);
        assert!(recs[2].witness.as_ref().unwrap().contains("θ_1"));
    }
}
