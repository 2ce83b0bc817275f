//! Exact arithmetic in the supported ambient groups, semigroup membership,
//! canonical `g = a b⁻¹` factorizations and word-ball enumeration.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use num_rational::Rational64;
use num_traits::{CheckedAdd, CheckedMul, One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational used throughout the crate.
pub type Q = Rational64;

/// Default cap on the number of elements in one word ball.
pub const DEFAULT_MAX_BALL: usize = 250_000;

/// Reads the enumeration cap from `GOID_MAX_BALL`.
pub fn max_ball_size() -> usize {
    std::env::var("GOID_MAX_BALL")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_BALL)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    IntAdditive,
    PosRationalMult,
    AffineRational,
    FiniteCyclic(u32),
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::IntAdditive => write!(f, "int-additive"),
            Family::PosRationalMult => write!(f, "pos-rational-mult"),
            Family::AffineRational => write!(f, "affine-rational"),
            Family::FiniteCyclic(n) => write!(f, "cyclic({n})"),
        }
    }
}

impl Family {
    pub fn identity(self) -> GroupElement {
        match self {
            Family::IntAdditive => GroupElement::Int(0),
            Family::PosRationalMult => GroupElement::PosRat(Q::one()),
            Family::AffineRational => GroupElement::Affine {
                a: Q::one(),
                b: Q::zero(),
            },
            Family::FiniteCyclic(n) => GroupElement::Cyclic {
                modulus: n,
                residue: 0,
            },
        }
    }
}

/// An exact element of one of the supported groups.
///
/// `Affine { a, b }` stands for the matrix `[[a, b], [0, 1]]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupElement {
    Int(i64),
    PosRat(Q),
    Affine { a: Q, b: Q },
    Cyclic { modulus: u32, residue: u32 },
}

impl GroupElement {
    pub fn int(n: i64) -> Self {
        GroupElement::Int(n)
    }

    pub fn pos_rat(p: i64, q: i64) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidElement(format!("{p}/{q}")));
        }
        let r = Q::new(p, q);
        if !r.is_positive() {
            return Err(Error::InvalidElement(format!(
                "{r} is not a positive rational"
            )));
        }
        Ok(GroupElement::PosRat(r))
    }

    pub fn affine(a: Q, b: Q) -> Result<Self> {
        if !a.is_positive() {
            return Err(Error::InvalidElement(format!(
                "affine scale {a} must be positive"
            )));
        }
        Ok(GroupElement::Affine { a, b })
    }

    pub fn cyclic(modulus: u32, residue: i64) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::InvalidElement("cyclic modulus 0".into()));
        }
        let r = residue.rem_euclid(modulus as i64) as u32;
        Ok(GroupElement::Cyclic {
            modulus,
            residue: r,
        })
    }

    pub fn family(&self) -> Family {
        match self {
            GroupElement::Int(_) => Family::IntAdditive,
            GroupElement::PosRat(_) => Family::PosRationalMult,
            GroupElement::Affine { .. } => Family::AffineRational,
            GroupElement::Cyclic { modulus, .. } => Family::FiniteCyclic(*modulus),
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == self.family().identity()
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            GroupElement::Int(n) => Some(*n),
            _ => None,
        }
    }

    pub fn as_rat(&self) -> Option<Q> {
        match self {
            GroupElement::PosRat(r) => Some(*r),
            _ => None,
        }
    }

    /// Checks the representation invariants of the payload.
    pub fn validate(&self) -> Result<()> {
        match self {
            GroupElement::PosRat(r) if !r.is_positive() => {
                Err(Error::InvalidElement(format!("{r} is not positive")))
            }
            GroupElement::Affine { a, .. } if !a.is_positive() => {
                Err(Error::InvalidElement(format!("affine scale {a} not positive")))
            }
            GroupElement::Cyclic { modulus, residue } if *modulus == 0 || residue >= modulus => {
                Err(Error::InvalidElement(format!("{residue} mod {modulus}")))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElement::Int(n) => write!(f, "{n}"),
            GroupElement::PosRat(r) => write!(f, "{r}"),
            GroupElement::Affine { a, b } => write!(f, "[[{a},{b}],[0,1]]"),
            GroupElement::Cyclic { residue, .. } => write!(f, "{residue}"),
        }
    }
}

fn mismatch(g: &GroupElement, h: &GroupElement) -> Error {
    Error::FamilyMismatch {
        left: g.family().to_string(),
        right: h.family().to_string(),
    }
}

/// The group product `g·h`.
pub fn compose(g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
    use GroupElement::*;
    match (g, h) {
        (Int(x), Int(y)) => x
            .checked_add(y)
            .map(Int)
            .ok_or_else(|| Error::InvalidElement(format!("{x} + {y} overflows"))),
        (PosRat(x), PosRat(y)) => x
            .checked_mul(y)
            .map(PosRat)
            .ok_or_else(|| Error::InvalidElement(format!("{x} * {y} overflows"))),
        (Affine { a, b }, Affine { a: c, b: d }) => {
            let overflow = || Error::InvalidElement(format!("{g} * {h} overflows"));
            let ac = a.checked_mul(c).ok_or_else(overflow)?;
            let ad = a.checked_mul(d).ok_or_else(overflow)?;
            let b2 = ad.checked_add(b).ok_or_else(overflow)?;
            Ok(Affine { a: ac, b: b2 })
        }
        (
            Cyclic {
                modulus: m,
                residue: r,
            },
            Cyclic {
                modulus: n,
                residue: s,
            },
        ) if m == n => Ok(Cyclic {
            modulus: *m,
            residue: ((*r as u64 + *s as u64) % *m as u64) as u32,
        }),
        _ => Err(mismatch(g, h)),
    }
}

pub fn invert(g: &GroupElement) -> GroupElement {
    use GroupElement::*;
    match g {
        Int(x) => Int(-x),
        PosRat(x) => PosRat(x.recip()),
        Affine { a, b } => Affine {
            a: a.recip(),
            b: -b / a,
        },
        Cyclic { modulus, residue } => Cyclic {
            modulus: *modulus,
            residue: (modulus - residue) % modulus,
        },
    }
}

/// `g·h⁻¹`.
pub fn divide(g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
    compose(g, &invert(h))
}

pub fn pow(g: &GroupElement, n: i64) -> Result<GroupElement> {
    let base = if n < 0 { invert(g) } else { g.clone() };
    let mut acc = g.family().identity();
    for _ in 0..n.unsigned_abs() {
        acc = compose(&acc, &base)?;
    }
    Ok(acc)
}

/// Named sub-semigroups with a decidable membership predicate.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SemigroupId {
    /// `ℕ ⊂ ℤ`.
    NatAdditive,
    /// `ℕ* ⊂ ℚ₊*`.
    PosIntMult,
    /// `{[[a,b]] : a ≥ 1, b ≥ 0}`.
    P1Affine,
    /// `{[[a,b]] : a ∈ ℕ*, b ≥ 0}`.
    P2Affine,
    FullGroup,
    /// `{e}`.
    Trivial,
    /// The monoid generated by a finite set, decided by positive-word search.
    Custom {
        generators: Vec<GroupElement>,
        bound: usize,
    },
    /// A base semigroup together with finitely many extra elements.
    WithExtra {
        base: Box<SemigroupId>,
        extra: Vec<GroupElement>,
    },
}

impl fmt::Display for SemigroupId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SemigroupId::NatAdditive => write!(f, "nat-additive"),
            SemigroupId::PosIntMult => write!(f, "pos-int-mult"),
            SemigroupId::P1Affine => write!(f, "p1-affine"),
            SemigroupId::P2Affine => write!(f, "p2-affine"),
            SemigroupId::FullGroup => write!(f, "full"),
            SemigroupId::Trivial => write!(f, "trivial"),
            SemigroupId::Custom { .. } => write!(f, "custom"),
            SemigroupId::WithExtra { base, .. } => write!(f, "{base}+extra"),
        }
    }
}

fn is_positive_integer(r: &Q) -> bool {
    r.is_integer() && r.is_positive()
}

impl SemigroupId {
    /// Checks that the semigroup makes sense inside `family`.
    pub fn check_family(&self, family: Family) -> Result<()> {
        let ok = match self {
            SemigroupId::NatAdditive => family == Family::IntAdditive,
            SemigroupId::PosIntMult => family == Family::PosRationalMult,
            SemigroupId::P1Affine | SemigroupId::P2Affine => family == Family::AffineRational,
            SemigroupId::FullGroup | SemigroupId::Trivial => true,
            SemigroupId::Custom { generators, .. } => {
                generators.iter().all(|g| g.family() == family)
            }
            SemigroupId::WithExtra { base, extra } => {
                base.check_family(family)?;
                extra.iter().all(|g| g.family() == family)
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::FamilyMismatch {
                left: self.to_string(),
                right: family.to_string(),
            })
        }
    }

    /// Membership `g ∈ P`. Only `Custom` can be undetermined.
    pub fn contains(&self, g: &GroupElement) -> Result<bool> {
        use GroupElement::*;
        Ok(match (self, g) {
            (SemigroupId::NatAdditive, Int(n)) => *n >= 0,
            (SemigroupId::PosIntMult, PosRat(r)) => is_positive_integer(r),
            (SemigroupId::P1Affine, Affine { a, b }) => *a >= Q::one() && !b.is_negative(),
            (SemigroupId::P2Affine, Affine { a, b }) => is_positive_integer(a) && !b.is_negative(),
            (SemigroupId::FullGroup, _) => true,
            (SemigroupId::Trivial, g) => g.is_identity(),
            (SemigroupId::Custom { generators, bound }, g) => {
                return positive_word_search(generators, g, *bound)
            }
            (SemigroupId::WithExtra { base, extra }, g) => {
                extra.contains(g) || base.contains(g)?
            }
            _ => false,
        })
    }
}

/// Decides `g ∈ ⟨generators⟩⁺ ∪ {e}` by breadth-first search over positive words.
fn positive_word_search(generators: &[GroupElement], g: &GroupElement, bound: usize) -> Result<bool> {
    if g.is_identity() {
        return Ok(true);
    }
    let Some(first) = generators.first() else {
        return Ok(false);
    };
    let mut seen: HashSet<GroupElement> = HashSet::new();
    let mut frontier = vec![first.family().identity()];
    seen.insert(first.family().identity());
    for _ in 0..bound {
        let mut next = Vec::new();
        for x in &frontier {
            for s in generators {
                let y = compose(x, s)?;
                if &y == g {
                    return Ok(true);
                }
                if seen.insert(y.clone()) {
                    next.push(y);
                }
            }
        }
        if next.is_empty() {
            return Ok(false);
        }
        frontier = next;
    }
    Err(Error::Undetermined {
        what: format!("membership of {g} in the custom semigroup"),
        bound,
    })
}

/// Positive words of length ≤ `bound` in `generators`, including `e`.
pub fn positive_elements(generators: &[GroupElement], family: Family, bound: usize) -> Result<Vec<GroupElement>> {
    let mut seen: HashSet<GroupElement> = HashSet::new();
    let mut out = vec![family.identity()];
    seen.insert(family.identity());
    let mut frontier = out.clone();
    for _ in 0..bound {
        let mut next = Vec::new();
        for x in &frontier {
            for s in generators {
                let y = compose(x, s)?;
                if seen.insert(y.clone()) {
                    next.push(y.clone());
                    out.push(y);
                }
            }
        }
        frontier = next;
    }
    Ok(out)
}

/// An ambient group, a sub-semigroup `P` with `G = P P⁻¹`, and generators
/// (members of `P`) used for word balls.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OreContext {
    pub family: Family,
    pub semigroup: SemigroupId,
    pub generators: Vec<GroupElement>,
}

impl OreContext {
    pub fn new(family: Family, semigroup: SemigroupId, generators: Vec<GroupElement>) -> Result<Self> {
        let ctx = OreContext {
            family,
            semigroup,
            generators,
        };
        ctx.validate()?;
        Ok(ctx)
    }

    pub fn validate(&self) -> Result<()> {
        self.semigroup.check_family(self.family)?;
        if !self.semigroup.contains(&self.family.identity())? {
            return Err(Error::NotInSemigroup(self.family.identity().to_string()));
        }
        for g in &self.generators {
            g.validate()?;
            if g.family() != self.family {
                return Err(mismatch(g, &self.family.identity()));
            }
            if !self.semigroup.contains(g)? {
                return Err(Error::NotInSemigroup(g.to_string()));
            }
        }
        Ok(())
    }

    pub fn identity(&self) -> GroupElement {
        self.family.identity()
    }

    pub fn in_semigroup(&self, g: &GroupElement) -> Result<bool> {
        if g.family() != self.family {
            return Err(mismatch(g, &self.identity()));
        }
        self.semigroup.contains(g)
    }

    pub fn ensure_in_semigroup(&self, g: &GroupElement) -> Result<()> {
        if self.in_semigroup(g)? {
            Ok(())
        } else {
            Err(Error::NotInSemigroup(g.to_string()))
        }
    }

    /// Canonical factorization `g = a b⁻¹` with `a, b ∈ P`.
    pub fn ore_decompose(&self, g: &GroupElement) -> Result<(GroupElement, GroupElement)> {
        use GroupElement::*;
        if g.family() != self.family {
            return Err(mismatch(g, &self.identity()));
        }
        let e = self.identity();
        match (&self.semigroup, g) {
            (SemigroupId::FullGroup, _) => Ok((g.clone(), e)),
            (SemigroupId::Trivial, _) if g.is_identity() => Ok((e.clone(), e)),
            (SemigroupId::Trivial, _) => Err(Error::NotOre(format!(
                "{g} is not a quotient of elements of the trivial semigroup"
            ))),
            (SemigroupId::NatAdditive, Int(n)) => {
                if *n < 0 {
                    Ok((Int(0), Int(-n)))
                } else {
                    Ok((Int(*n), Int(0)))
                }
            }
            (SemigroupId::PosIntMult, PosRat(r)) => Ok((
                PosRat(Q::from_integer(*r.numer())),
                PosRat(Q::from_integer(*r.denom())),
            )),
            (SemigroupId::P1Affine | SemigroupId::P2Affine, Affine { a, b }) => {
                let a2 = if self.semigroup == SemigroupId::P1Affine {
                    if *a >= Q::one() {
                        Q::one()
                    } else {
                        a.recip()
                    }
                } else {
                    Q::from_integer(*a.denom())
                };
                let b2 = if b.is_negative() { -b / a } else { Q::zero() };
                let bb = Affine { a: a2, b: b2 };
                let aa = compose(g, &bb)?;
                Ok((aa, bb))
            }
            (SemigroupId::Custom { generators, bound }, _) => {
                let cands = positive_elements(generators, self.family, *bound)?;
                for b in &cands {
                    let a = compose(g, b)?;
                    if self.semigroup.contains(&a).unwrap_or(false) {
                        return Ok((a, b.clone()));
                    }
                }
                Err(Error::Undetermined {
                    what: format!("factorization of {g}"),
                    bound: *bound,
                })
            }
            _ => Err(Error::NotOre(format!(
                "no factorization rule for {} in {}",
                g, self.semigroup
            ))),
        }
    }

    /// Enumerates the ball of `radius` in the word metric of the generators.
    pub fn word_ball(&self, radius: usize) -> Result<WordBall> {
        WordBall::build(self, radius)
    }

    /// Word length of `g`, searching up to `max_radius`.
    pub fn word_length(&self, g: &GroupElement, max_radius: usize) -> Result<Option<usize>> {
        let ball = self.word_ball(max_radius)?;
        Ok(ball.length(g))
    }
}

/// A word ball with canonical order: word length, then element order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordBall {
    pub radius: usize,
    pub elements: Vec<GroupElement>,
    pub lengths: HashMap<GroupElement, usize>,
    /// True when the ball stopped growing before reaching `radius`.
    pub saturated: bool,
}

impl WordBall {
    fn build(ctx: &OreContext, radius: usize) -> Result<Self> {
        if ctx.generators.is_empty() {
            return Err(Error::Invalid("word ball needs at least one generator".into()));
        }
        let cap = max_ball_size();
        let mut steps: Vec<GroupElement> = Vec::new();
        for g in &ctx.generators {
            steps.push(g.clone());
            steps.push(invert(g));
        }
        let e = ctx.identity();
        let mut lengths = HashMap::new();
        lengths.insert(e.clone(), 0);
        let mut layers: BTreeMap<usize, Vec<GroupElement>> = BTreeMap::new();
        layers.insert(0, vec![e.clone()]);
        let mut frontier = vec![e];
        let mut saturated = false;
        for len in 1..=radius {
            let mut next = Vec::new();
            for x in &frontier {
                for s in &steps {
                    let y = compose(x, s)?;
                    if !lengths.contains_key(&y) {
                        lengths.insert(y.clone(), len);
                        next.push(y);
                        if lengths.len() > cap {
                            return Err(Error::ResourceCap {
                                what: format!("word ball of radius {radius}"),
                                cap,
                            });
                        }
                    }
                }
            }
            if next.is_empty() {
                saturated = true;
                break;
            }
            next.sort();
            layers.insert(len, next.clone());
            frontier = next;
        }
        if let Family::FiniteCyclic(n) = ctx.family {
            saturated |= lengths.len() == n as usize;
        }
        let elements = layers.into_values().flatten().collect();
        Ok(WordBall {
            radius,
            elements,
            lengths,
            saturated,
        })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.lengths.contains_key(g)
    }

    pub fn length(&self, g: &GroupElement) -> Option<usize> {
        self.lengths.get(g).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = &GroupElement> {
        self.elements.iter()
    }

    /// Elements of word length at most `r`.
    pub fn within(&self, r: usize) -> impl Iterator<Item = &GroupElement> {
        self.elements
            .iter()
            .filter(move |g| self.lengths[*g] <= r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> Q {
        Q::new(p, d)
    }

    fn aff(a: Q, b: Q) -> GroupElement {
        GroupElement::affine(a, b).unwrap()
    }

    #[test]
    fn compose_examples() {
        assert_eq!(compose(&GroupElement::Int(2), &GroupElement::Int(3)).unwrap(), GroupElement::Int(5));
        let x = GroupElement::pos_rat(2, 3).unwrap();
        let y = GroupElement::pos_rat(9, 4).unwrap();
        assert_eq!(compose(&x, &y).unwrap(), GroupElement::pos_rat(3, 2).unwrap());
        let g = aff(q(2, 1), q(1, 1));
        let h = aff(q(3, 1), q(0, 1));
        assert_eq!(compose(&g, &h).unwrap(), aff(q(6, 1), q(1, 1)));
        assert!(compose(&GroupElement::Int(1), &x).is_err());
    }

    #[test]
    fn invert_examples() {
        assert_eq!(invert(&GroupElement::Int(5)), GroupElement::Int(-5));
        assert_eq!(invert(&aff(q(2, 1), q(1, 1))), aff(q(1, 2), q(-1, 2)));
        assert_eq!(
            invert(&GroupElement::cyclic(5, 3).unwrap()),
            GroupElement::cyclic(5, 2).unwrap()
        );
    }

    #[test]
    fn membership_examples() {
        let nat = OreContext::new(Family::IntAdditive, SemigroupId::NatAdditive, vec![GroupElement::Int(1)]).unwrap();
        assert!(nat.in_semigroup(&GroupElement::Int(3)).unwrap());
        assert!(!nat.in_semigroup(&GroupElement::Int(-1)).unwrap());
        assert!(!SemigroupId::P1Affine.contains(&aff(q(1, 2), q(0, 1))).unwrap());
        assert!(SemigroupId::P2Affine.contains(&aff(q(2, 1), q(1, 3))).unwrap());
        assert!(!SemigroupId::P2Affine.contains(&aff(q(3, 2), q(0, 1))).unwrap());
    }

    #[test]
    fn decompose_examples() {
        let nat = OreContext::new(Family::IntAdditive, SemigroupId::NatAdditive, vec![GroupElement::Int(1)]).unwrap();
        assert_eq!(
            nat.ore_decompose(&GroupElement::Int(-2)).unwrap(),
            (GroupElement::Int(0), GroupElement::Int(2))
        );
        let mult = OreContext::new(
            Family::PosRationalMult,
            SemigroupId::PosIntMult,
            vec![GroupElement::pos_rat(2, 1).unwrap()],
        )
        .unwrap();
        assert_eq!(
            mult.ore_decompose(&GroupElement::pos_rat(3, 4).unwrap()).unwrap(),
            (GroupElement::pos_rat(3, 1).unwrap(), GroupElement::pos_rat(4, 1).unwrap())
        );
        let p1 = OreContext::new(Family::AffineRational, SemigroupId::P1Affine, vec![aff(q(2, 1), q(0, 1))]).unwrap();
        let g = aff(q(1, 2), q(-1, 1));
        let (a, b) = p1.ore_decompose(&g).unwrap();
        assert!(p1.in_semigroup(&a).unwrap() && p1.in_semigroup(&b).unwrap());
        assert_eq!(divide(&a, &b).unwrap(), g);
    }

    #[test]
    fn custom_decomposition_searches() {
        let ctx = OreContext::new(
            Family::IntAdditive,
            SemigroupId::Custom {
                generators: vec![GroupElement::Int(2), GroupElement::Int(3)],
                bound: 10,
            },
            vec![GroupElement::Int(2), GroupElement::Int(3)],
        )
        .unwrap();
        assert!(matches!(ctx.in_semigroup(&GroupElement::Int(1)), Err(Error::Undetermined { .. })));
        assert!(ctx.in_semigroup(&GroupElement::Int(5)).unwrap());
        let (a, b) = ctx.ore_decompose(&GroupElement::Int(1)).unwrap();
        assert_eq!(divide(&a, &b).unwrap(), GroupElement::Int(1));
        assert!(ctx.in_semigroup(&a).unwrap() && ctx.in_semigroup(&b).unwrap());
    }

    #[test]
    fn word_ball_examples() {
        let z = OreContext::new(Family::IntAdditive, SemigroupId::NatAdditive, vec![GroupElement::Int(1)]).unwrap();
        let b = z.word_ball(2).unwrap();
        let got: Vec<i64> = {
            let mut v: Vec<i64> = b.iter().map(|g| g.as_int().unwrap()).collect();
            v.sort();
            v
        };
        assert_eq!(got, vec![-2, -1, 0, 1, 2]);

        let m = OreContext::new(
            Family::PosRationalMult,
            SemigroupId::PosIntMult,
            vec![GroupElement::pos_rat(2, 1).unwrap(), GroupElement::pos_rat(3, 1).unwrap()],
        )
        .unwrap();
        let mut got: Vec<Q> = m.word_ball(1).unwrap().iter().map(|g| g.as_rat().unwrap()).collect();
        got.sort();
        assert_eq!(got, vec![q(1, 3), q(1, 2), q(1, 1), q(2, 1), q(3, 1)]);

        let c = OreContext::new(Family::FiniteCyclic(3), SemigroupId::FullGroup, vec![GroupElement::cyclic(3, 1).unwrap()]).unwrap();
        let ball = c.word_ball(5).unwrap();
        assert_eq!(ball.len(), 3);
        assert!(ball.saturated);
    }

    #[test]
    fn word_ball_order_is_length_then_value() {
        let z = OreContext::new(Family::IntAdditive, SemigroupId::NatAdditive, vec![GroupElement::Int(1)]).unwrap();
        let b = z.word_ball(2).unwrap();
        let v: Vec<i64> = b.iter().map(|g| g.as_int().unwrap()).collect();
        assert_eq!(v, vec![0, -1, 1, -2, 2]);
    }
}
