//! The dilated space `X̃ = (X×G)/~`, its group action `θ̃_h[x,g] = [x,gh]`,
//! the reduction map `(x,g) ↦ ([x,e], g)` and the group action `θ̂` of a
//! homeomorphism action.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;

use crate::dynamics::{ActionInstance, Point};
use crate::error::{Error, Result};
use crate::group::{compose, divide, invert, GroupElement, WordBall};
use crate::groupoid::{transfer_opt, Arrow, TruncatedGroupoid};
use crate::report::{Check, Record, TriState};

/// A class `[x,g]` in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DilationClass {
    pub point: Point,
    pub label: GroupElement,
}

impl fmt::Display for DilationClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.point, self.label)
    }
}

impl DilationClass {
    /// Whether the class lies in `X′ = {[x,e]}`.
    pub fn in_unit_part(&self) -> bool {
        self.label.is_identity()
    }
}

/// Decides `(x,g) ~ (y,h)`: `k = g h⁻¹ ∈ Q_x` and `u(x,k) = y`.
pub fn equivalent(a: &ActionInstance, p: (&Point, &GroupElement), q: (&Point, &GroupElement)) -> Result<TriState> {
    let k = divide(p.1, q.1)?;
    match transfer_opt(a, p.0, &k) {
        Ok(u) => Ok(TriState::from_bool(u.as_ref() == Some(q.0))),
        Err(Error::Undetermined { bound, .. }) => Ok(TriState::Undetermined { bound }),
        Err(e) => Err(e),
    }
}

/// Scans `k` in the word ball of `radius` to find the canonical representative.
pub struct Canonicalizer<'a> {
    action: &'a ActionInstance,
    ball: WordBall,
    memo: RefCell<HashMap<(Point, GroupElement), DilationClass>>,
}

impl<'a> Canonicalizer<'a> {
    pub fn new(action: &'a ActionInstance, radius: usize) -> Result<Self> {
        Ok(Canonicalizer {
            action,
            ball: action.ctx.word_ball(radius)?,
            memo: RefCell::new(HashMap::new()),
        })
    }

    fn key(&self, c: &DilationClass) -> (usize, GroupElement, Point) {
        let len = self.ball.length(&c.label).unwrap_or(usize::MAX);
        (len, c.label.clone(), c.point.clone())
    }

    /// The representative of `[x,g]` with the shortest label, ties broken by
    /// label then point order.
    pub fn canonicalize(&self, x: &Point, g: &GroupElement) -> Result<DilationClass> {
        let key = (x.clone(), g.clone());
        if let Some(c) = self.memo.borrow().get(&key) {
            return Ok(c.clone());
        }
        let c = self.search(x, g)?;
        self.memo.borrow_mut().insert(key, c.clone());
        Ok(c)
    }

    fn search(&self, x: &Point, g: &GroupElement) -> Result<DilationClass> {
        let mut best = DilationClass {
            point: x.clone(),
            label: g.clone(),
        };
        loop {
            let start = best.clone();
            for k in self.ball.iter() {
                if let Some(y) = transfer_opt(self.action, &start.point, k)? {
                    let cand = DilationClass {
                        point: y,
                        label: compose(&invert(k), &start.label)?,
                    };
                    if self.key(&cand) < self.key(&best) {
                        best = cand;
                    }
                }
            }
            if best == start {
                return Ok(best);
            }
        }
    }

    /// `θ̃_h[x,g] = [x,gh]`.
    pub fn dilated_act(&self, cls: &DilationClass, h: &GroupElement) -> Result<DilationClass> {
        self.canonicalize(&cls.point, &compose(&cls.label, h)?)
    }
}

pub fn canonicalize(a: &ActionInstance, x: &Point, g: &GroupElement, radius: usize) -> Result<DilationClass> {
    Canonicalizer::new(a, radius)?.canonicalize(x, g)
}

pub fn dilated_act(a: &ActionInstance, cls: &DilationClass, h: &GroupElement, radius: usize) -> Result<DilationClass> {
    Canonicalizer::new(a, radius)?.dilated_act(cls, h)
}

/// An arrow `([x,e], g)` of the reduction of `X̃⋊G` to `X′`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ReducedArrow {
    pub range: DilationClass,
    pub label: GroupElement,
    pub source: DilationClass,
}

impl fmt::Display for ReducedArrow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.range, self.label)
    }
}

/// `(x,g) ↦ ([x,e], g)`, with source `θ̃_g[x,e] = [x,g]`.
pub fn reduction_iso(can: &Canonicalizer<'_>, arrow: &Arrow) -> Result<ReducedArrow> {
    let e = can.action.ctx.identity();
    Ok(ReducedArrow {
        range: can.canonicalize(&arrow.base, &e)?,
        label: arrow.label.clone(),
        source: can.canonicalize(&arrow.base, &arrow.label)?,
    })
}

/// Inverse of [`reduction_iso`] on classes in `X′`.
pub fn reduction_inverse(r: &ReducedArrow) -> Option<Arrow> {
    r.range.in_unit_part().then(|| Arrow {
        base: r.range.point.clone(),
        label: r.label.clone(),
    })
}

/// Checks that the reduction map is a bijective, label-preserving
/// homomorphism onto the arrows of the `X′`-reduction over the window.
pub fn check_reduction(t: &TruncatedGroupoid) -> Result<Vec<Record>> {
    let a = &t.action;
    let can = Canonicalizer::new(a, t.radius)?;
    let images: Vec<ReducedArrow> = t.arrows.iter().map(|p| reduction_iso(&can, p)).collect::<Result<_>>()?;

    let mut inj = Check::new();
    let mut seen: HashMap<(&DilationClass, &GroupElement), usize> = HashMap::new();
    for (i, r) in images.iter().enumerate() {
        if let Some(&j) = seen.get(&(&r.range, &r.label)) {
            inj.fail(format!("{} and {} both map to {r}", t.arrows[j], t.arrows[i]));
        } else {
            inj.test(true, String::new);
            seen.insert((&r.range, &r.label), i);
        }
        let back = reduction_inverse(r);
        inj.test(back.as_ref() == Some(&t.arrows[i]), || format!("{r} does not recover {}", t.arrows[i]));
    }

    let mut labels = Check::new();
    let mut unit_part = Check::new();
    for (i, (p, r)) in t.arrows.iter().zip(&images).enumerate() {
        labels.test(p.label == r.label, || format!("{p} ↦ {r}"));
        let want = DilationClass {
            point: t.sources[i].clone(),
            label: a.ctx.identity(),
        };
        unit_part.test(r.range.in_unit_part() && r.source == want, || {
            format!("{p} ↦ {r} with source {} instead of {want}", r.source)
        });
    }

    let mut hom = Check::new();
    for (i, j) in t.composable_pairs() {
        let (ri, rj) = (&images[i], &images[j]);
        let composable = ri.source == rj.range;
        let product = match crate::groupoid::compose_arrows(a, &t.arrows[i], &t.arrows[j]) {
            Ok(p) => p,
            Err(e) => {
                hom.fail(format!("{}·{}: {e}", t.arrows[i], t.arrows[j]));
                continue;
            }
        };
        let image = reduction_iso(&can, &product)?;
        let expected = ReducedArrow {
            range: ri.range.clone(),
            label: compose(&ri.label, &rj.label)?,
            source: rj.source.clone(),
        };
        hom.test(composable && image == expected, || {
            format!("{}·{} ↦ {image}, expected {expected}", t.arrows[i], t.arrows[j])
        });
    }

    // onto: every ([x,e], g) with x in the window, g in the ball and [x,g] ∈ X′ is hit
    let mut onto = Check::new();
    for x in &t.window {
        for g in t.ball.iter() {
            let cls = can.canonicalize(x, g)?;
            if cls.in_unit_part() {
                let arrow = Arrow {
                    base: x.clone(),
                    label: g.clone(),
                };
                onto.test(t.index_of(&arrow).is_some(), || format!("([{x},e], {g}) has no preimage"));
            }
        }
    }

    Ok(vec![
        Record::from_check("reduction map injective", "reduction isomorphism onto X'", inj),
        Record::from_check("reduction map preserves labels", "reduction isomorphism onto X'", labels),
        Record::from_check("range and source land in X'", "reduction isomorphism onto X'", unit_part),
        Record::from_check("reduction map is a homomorphism", "reduction isomorphism onto X'", hom),
        Record::from_check("reduction map onto the X'-reduction", "reduction isomorphism onto X'", onto),
    ])
}

/// `θ̂_g(x) = θ_n⁻¹(θ_m(x))` for `g = m n⁻¹`; the action must be by homeomorphisms.
pub fn group_dilation_act(a: &ActionInstance, g: &GroupElement, x: &Point) -> Result<Point> {
    match a.is_homeomorphism()? {
        TriState::True => {}
        other => {
            return Err(Error::NotHomeomorphism(format!(
                "{}: surjectivity of the generators is {other}",
                a.name
            )))
        }
    }
    transfer_opt(a, x, g)?.ok_or_else(|| Error::NotHomeomorphism(format!("θ̂_{g}({x}) undefined")))
}

/// For homeomorphism actions: `[θ̂_g(x), e] = θ̃_g[x,e] = [x,g]` on the window.
pub fn check_intertwining(a: &ActionInstance, window: &[Point], radius: usize) -> Result<Record> {
    let can = Canonicalizer::new(a, radius)?;
    let e = a.ctx.identity();
    let ball = a.ctx.word_ball(radius)?;
    let mut check = Check::new();
    for x in window {
        let start = can.canonicalize(x, &e)?;
        for g in ball.iter() {
            let y = group_dilation_act(a, g, x)?;
            let lhs = can.canonicalize(&y, &e)?;
            let rhs = can.dilated_act(&start, g)?;
            check.test(lhs == rhs, || format!("[θ̂_{g}({x}), e] = {lhs} but θ̃_{g}[{x},e] = {rhs}"));
        }
    }
    Ok(Record::from_check(
        "x -> [x,e] intertwines the dilations",
        "homeomorphism-case dilation equals the canonical dilation",
        check,
    ))
}
