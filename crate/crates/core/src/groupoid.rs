//! The transformation groupoid `X⋊P`: the sets `Q_x`, the transfer map
//! `u(x,g)`, arrow algebra, orbits, isotropy and truncated enumeration.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::dynamics::{ActionInstance, Point, Space};
use crate::error::{Error, Result};
use crate::group::{compose, invert, max_ball_size, GroupElement, WordBall};
use crate::report::{Check, Record, TriState};

/// `u(x,g)` computed from an explicit factorization `g = a b⁻¹`.
///
/// Returns `None` when `θ_a(x)` is not in the image of `θ_b`.
pub fn transfer_via(a_inst: &ActionInstance, x: &Point, a: &GroupElement, b: &GroupElement) -> Result<Option<Point>> {
    let y = a_inst.act(a, x)?;
    a_inst.preimage(b, &y)
}

/// `u(x,g)` if `g ∈ Q_x`.
pub fn transfer_opt(a_inst: &ActionInstance, x: &Point, g: &GroupElement) -> Result<Option<Point>> {
    let (a, b) = a_inst.ctx.ore_decompose(g)?;
    transfer_via(a_inst, x, &a, &b)
}

/// Whether `g ∈ Q_x`.
pub fn q_contains(a_inst: &ActionInstance, x: &Point, g: &GroupElement) -> Result<bool> {
    Ok(transfer_opt(a_inst, x, g)?.is_some())
}

/// `u(x,g)`; errors when `g ∉ Q_x`.
pub fn transfer(a_inst: &ActionInstance, x: &Point, g: &GroupElement) -> Result<Point> {
    transfer_opt(a_inst, x, g)?.ok_or_else(|| Error::NotInQ {
        point: x.to_string(),
        label: g.to_string(),
    })
}

/// An arrow `(x,g)` of `X⋊P`, with range `x` and source `u(x,g)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Arrow {
    pub base: Point,
    pub label: GroupElement,
}

impl fmt::Display for Arrow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.base, self.label)
    }
}

impl Arrow {
    /// Builds `(x,g)` after checking `g ∈ Q_x`.
    pub fn new(a_inst: &ActionInstance, base: Point, label: GroupElement) -> Result<Arrow> {
        if !q_contains(a_inst, &base, &label)? {
            return Err(Error::NotInQ {
                point: base.to_string(),
                label: label.to_string(),
            });
        }
        Ok(Arrow { base, label })
    }

    pub fn unit(a_inst: &ActionInstance, x: Point) -> Arrow {
        Arrow {
            base: x,
            label: a_inst.ctx.identity(),
        }
    }

    pub fn range(&self) -> &Point {
        &self.base
    }

    pub fn source(&self, a_inst: &ActionInstance) -> Result<Point> {
        transfer(a_inst, &self.base, &self.label)
    }

    pub fn is_unit(&self) -> bool {
        self.label.is_identity()
    }
}

/// `(x,g)(u(x,g),h) = (x,gh)`.
pub fn compose_arrows(a_inst: &ActionInstance, p: &Arrow, q: &Arrow) -> Result<Arrow> {
    let s = p.source(a_inst)?;
    if s != q.base {
        return Err(Error::NotComposable(format!(
            "{p} has source {s} but {q} has range {}",
            q.base
        )));
    }
    Arrow::new(a_inst, p.base.clone(), compose(&p.label, &q.label)?)
}

fn shown(r: &Result<Arrow>) -> String {
    match r {
        Ok(p) => p.to_string(),
        Err(e) => e.to_string(),
    }
}

/// `(x,g)⁻¹ = (u(x,g), g⁻¹)`.
pub fn invert_arrow(a_inst: &ActionInstance, p: &Arrow) -> Result<Arrow> {
    Ok(Arrow {
        base: p.source(a_inst)?,
        label: invert(&p.label),
    })
}

/// `{u(x,g) : g ∈ ball ∩ Q_x}`.
pub fn orbit(a_inst: &ActionInstance, x: &Point, radius: usize) -> Result<Vec<Point>> {
    let ball = a_inst.ctx.word_ball(radius)?;
    let mut out = BTreeSet::new();
    for g in ball.iter() {
        if let Some(y) = transfer_opt(a_inst, x, g)? {
            out.insert(y);
        }
    }
    Ok(out.into_iter().collect())
}

/// `{g ∈ ball ∩ Q_x : u(x,g) = x}` in canonical order.
pub fn isotropy(a_inst: &ActionInstance, x: &Point, radius: usize) -> Result<Vec<GroupElement>> {
    let ball = a_inst.ctx.word_ball(radius)?;
    isotropy_in(a_inst, x, &ball)
}

fn isotropy_in(a_inst: &ActionInstance, x: &Point, ball: &WordBall) -> Result<Vec<GroupElement>> {
    let mut out = Vec::new();
    for g in ball.iter() {
        if transfer_opt(a_inst, x, g)?.as_ref() == Some(x) {
            out.push(g.clone());
        }
    }
    Ok(out)
}

/// Whether `y` lies in the orbit of `x`, using the rule's closed-form connecting label.
pub fn orbit_contains(a_inst: &ActionInstance, x: &Point, y: &Point) -> Result<TriState> {
    match a_inst.connecting_label(x, y) {
        Ok(Some(g)) => Ok(TriState::from_bool(transfer_opt(a_inst, x, &g)?.as_ref() == Some(y))),
        Ok(None) => Ok(TriState::False),
        Err(Error::Undetermined { bound, .. }) => Ok(TriState::Undetermined { bound }),
        Err(e) => Err(e),
    }
}

/// Outcome of a topological-freeness check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Freeness {
    pub verdict: TriState,
    /// A non-free point with a non-trivial isotropy label.
    pub witness: Option<(Point, GroupElement)>,
    pub checked: usize,
    pub note: String,
}

impl Freeness {
    pub fn record(&self, name: &str) -> Record {
        let witness = self
            .witness
            .as_ref()
            .map(|(x, g)| format!("u({x},{g}) = {x}"))
            .or_else(|| Some(self.note.clone()));
        Record::from_tristate(
            format!("{name} is topologically free"),
            "points with trivial isotropy are dense",
            self.verdict,
            true,
            witness,
            self.checked,
        )
    }
}

/// Topological freeness decided from isotropy in the word ball of `radius`.
///
/// Finite spaces are decided exactly when the ball saturates; one-point
/// spaces are judged on their isolated window points (isolated points are
/// dense); the rectangle is judged on interior sample points.
pub fn is_topologically_free(a_inst: &ActionInstance, radius: usize) -> Result<Freeness> {
    let ball = a_inst.ctx.word_ball(radius)?;
    let points: Vec<Point> = match &a_inst.space {
        Space::Finite { .. } | Space::OnePoint { .. } => a_inst
            .default_window()?
            .into_iter()
            .filter(|p| a_inst.space.is_isolated(p))
            .collect(),
        Space::Rect => a_inst
            .default_samples(0)?
            .into_iter()
            .filter(|p| match p {
                Point::Rect { x, y } => *y > 0.into() && *x != crate::dynamics::Coord::NegInf,
                _ => false,
            })
            .collect(),
    };
    let mut checked = 0;
    for x in &points {
        checked += 1;
        let iso: Vec<GroupElement> = isotropy_in(a_inst, x, &ball)?
            .into_iter()
            .filter(|g| !g.is_identity())
            .collect();
        // prefer a witness inside the semigroup
        let pick = iso
            .iter()
            .find(|g| a_inst.ctx.in_semigroup(g).unwrap_or(false))
            .or(iso.first())
            .cloned();
        if let Some(g) = pick {
            return Ok(Freeness {
                verdict: TriState::False,
                witness: Some((x.clone(), g)),
                checked,
                note: String::new(),
            });
        }
    }
    let (verdict, note) = match &a_inst.space {
        Space::Finite { .. } if ball.saturated => (TriState::True, "exact: the group is exhausted".to_string()),
        Space::Finite { .. } => (
            TriState::Undetermined { bound: radius },
            format!("no isotropy found up to radius {radius}"),
        ),
        Space::OnePoint { .. } => (
            TriState::True,
            format!("all {checked} isolated window points free up to radius {radius}"),
        ),
        Space::Rect => (
            TriState::True,
            format!("all {checked} interior sample points free up to radius {radius}; boundary points are not free"),
        ),
    };
    Ok(Freeness {
        verdict,
        witness: None,
        checked,
        note,
    })
}

/// A finite piece of `X⋊P`: arrows based in a window with labels in a word ball.
#[derive(Debug, Clone)]
pub struct TruncatedGroupoid {
    pub action: ActionInstance,
    pub window: Vec<Point>,
    pub radius: usize,
    pub ball: WordBall,
    pub arrows: Vec<Arrow>,
    pub sources: Vec<Point>,
    index: HashMap<Arrow, usize>,
    window_index: HashMap<Point, usize>,
}

/// All arrows `(x,g)` with `x` in `window` and `g` in the ball of `radius` ∩ `Q_x`.
pub fn enumerate(a_inst: &ActionInstance, window: &[Point], radius: usize) -> Result<TruncatedGroupoid> {
    let ball = a_inst.ctx.word_ball(radius)?;
    let cap = max_ball_size();
    let mut win: Vec<Point> = Vec::new();
    let mut window_index = HashMap::new();
    for p in window {
        if !a_inst.space.contains(p) {
            return Err(Error::NotInSpace(p.to_string()));
        }
        if !window_index.contains_key(p) {
            window_index.insert(p.clone(), win.len());
            win.push(p.clone());
        }
    }
    let mut arrows = Vec::new();
    let mut sources = Vec::new();
    for x in &win {
        for g in ball.iter() {
            if let Some(s) = transfer_opt(a_inst, x, g)? {
                arrows.push(Arrow {
                    base: x.clone(),
                    label: g.clone(),
                });
                sources.push(s);
                if arrows.len() > cap {
                    return Err(Error::ResourceCap {
                        what: "truncated groupoid".into(),
                        cap,
                    });
                }
            }
        }
    }
    let index = arrows.iter().enumerate().map(|(i, a)| (a.clone(), i)).collect();
    Ok(TruncatedGroupoid {
        action: a_inst.clone(),
        window: win,
        radius,
        ball,
        arrows,
        sources,
        index,
        window_index,
    })
}

impl TruncatedGroupoid {
    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn index_of(&self, a: &Arrow) -> Option<usize> {
        self.index.get(a).copied()
    }

    pub fn in_window(&self, p: &Point) -> bool {
        self.window_index.contains_key(p)
    }

    pub fn window_position(&self, p: &Point) -> Option<usize> {
        self.window_index.get(p).copied()
    }

    pub fn source_of(&self, i: usize) -> &Point {
        &self.sources[i]
    }

    /// Indices of arrows based at `x`, in label order.
    pub fn arrows_at(&self, x: &Point) -> Vec<usize> {
        self.arrows
            .iter()
            .enumerate()
            .filter(|(_, a)| &a.base == x)
            .map(|(i, _)| i)
            .collect()
    }

    /// Pairs `(i, j)` with `s(arrow_i) = r(arrow_j)`.
    pub fn composable_pairs(&self) -> Vec<(usize, usize)> {
        let mut by_base: HashMap<&Point, Vec<usize>> = HashMap::new();
        for (i, a) in self.arrows.iter().enumerate() {
            by_base.entry(&a.base).or_default().push(i);
        }
        let mut out = Vec::new();
        for i in 0..self.arrows.len() {
            if let Some(js) = by_base.get(&self.sources[i]) {
                for &j in js {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Whether the truncation is all of `X⋊P`: finite space fully in window and a saturated ball.
    pub fn is_exact(&self) -> bool {
        self.ball.saturated && self.action.space.size() == Some(self.window.len())
    }

    /// Groupoid axioms, the cocycle identity and the label homomorphism on in-window data.
    pub fn check_axioms(&self) -> Result<Vec<Record>> {
        let a = &self.action;
        let pairs = self.composable_pairs();
        let mut by_base: HashMap<&Point, Vec<usize>> = HashMap::new();
        for (i, arr) in self.arrows.iter().enumerate() {
            by_base.entry(&arr.base).or_default().push(i);
        }

        let mut closure = Check::new();
        let mut label_hom = Check::new();
        let mut assoc = Check::new();
        let mut inv_of_product = Check::new();
        for &(i, j) in &pairs {
            let (p, q) = (&self.arrows[i], &self.arrows[j]);
            match compose_arrows(a, p, q) {
                Ok(pq) => {
                    closure.test(true, String::new);
                    let gh = compose(&p.label, &q.label)?;
                    label_hom.test(pq.label == gh, || format!("c({p}·{q}) = {} ≠ {gh}", pq.label));
                    let lhs = invert_arrow(a, &pq)?;
                    let rhs = compose_arrows(a, &invert_arrow(a, q)?, &invert_arrow(a, p)?);
                    inv_of_product.test(rhs.as_ref().ok() == Some(&lhs), || {
                        format!("({p}·{q})⁻¹ = {lhs} but q⁻¹p⁻¹ = {rhs:?}")
                    });
                    if let Some(ks) = by_base.get(&self.sources[j]) {
                        for &k in ks {
                            let r = &self.arrows[k];
                            let left = compose_arrows(a, &pq, r);
                            let right = compose_arrows(a, q, r).and_then(|qr| compose_arrows(a, p, &qr));
                            assoc.test(left.as_ref().ok().is_some() && left.as_ref().ok() == right.as_ref().ok(), || {
                                format!("({p}·{q})·{r} = {left:?} vs {p}·({q}·{r}) = {right:?}")
                            });
                        }
                    }
                }
                Err(err) => closure.fail(format!("{p}·{q}: {err}")),
            }
        }

        let mut inverse = Check::new();
        let mut unit = Check::new();
        for (i, p) in self.arrows.iter().enumerate() {
            let s = &self.sources[i];
            let pinv = invert_arrow(a, p)?;
            let valid = q_contains(a, &pinv.base, &pinv.label)?;
            inverse.test(valid, || format!("{pinv} = {p}⁻¹ is not an arrow"));
            if !valid {
                continue;
            }
            let back = invert_arrow(a, &pinv)?;
            inverse.test(&back == p, || format!("({p}⁻¹)⁻¹ = {back}"));
            let r_unit = compose_arrows(a, p, &pinv);
            let want = Arrow::unit(a, p.base.clone());
            inverse.test(r_unit.as_ref() == Ok(&want), || format!("{p}·{p}⁻¹ = {}", shown(&r_unit)));
            let s_unit = compose_arrows(a, &pinv, p);
            let want = Arrow::unit(a, s.clone());
            inverse.test(s_unit.as_ref() == Ok(&want), || format!("{p}⁻¹·{p} = {}", shown(&s_unit)));
            let lu = compose_arrows(a, &Arrow::unit(a, p.base.clone()), p);
            unit.test(lu.as_ref() == Ok(p), || format!("r({p})·{p} = {}", shown(&lu)));
            let ru = compose_arrows(a, p, &Arrow::unit(a, s.clone()));
            unit.test(ru.as_ref() == Ok(p), || format!("{p}·s({p}) = {}", shown(&ru)));
        }

        let mut cocycle = Check::new();
        for (i, p) in self.arrows.iter().enumerate() {
            let y = &self.sources[i];
            for h in self.ball.iter() {
                let lhs = transfer_opt(a, y, h)?;
                let gh = compose(&p.label, h)?;
                let rhs = transfer_opt(a, &p.base, &gh)?;
                cocycle.test(lhs == rhs, || {
                    format!(
                        "u(u({},{}),{h}) = {lhs:?} but u({},{gh}) = {rhs:?}",
                        p.base, p.label, p.base
                    )
                });
            }
        }

        Ok(vec![
            Record::from_check("composition closes on in-window pairs", "groupoid operations", closure),
            Record::from_check("associativity", "groupoid operations", assoc),
            Record::from_check("inverse laws", "groupoid operations", inverse),
            Record::from_check("(pq)^-1 = q^-1 p^-1", "groupoid operations", inv_of_product),
            Record::from_check("unit laws", "groupoid operations", unit),
            Record::from_check("cocycle identity u(u(x,g),h) = u(x,gh)", "transfer cocycle identity", cocycle),
            Record::from_check("label map c(x,g) = g is a homomorphism", "canonical cocycle c", label_hom),
        ])
    }

    /// Compares the canonical transfer with the transfer from every other
    /// factorization `g = a b⁻¹` with `a, b` in `P` ∩ ball of `alt_radius`.
    pub fn check_decomposition_independence(&self, alt_radius: usize) -> Result<Record> {
        let a = &self.action;
        let pos = a.semigroup_elements(alt_radius)?;
        let mut check = Check::new();
        for (i, p) in self.arrows.iter().enumerate() {
            for b in &pos {
                let aa = compose(&p.label, b)?;
                if !a.ctx.in_semigroup(&aa).unwrap_or(false) {
                    continue;
                }
                let via = transfer_via(a, &p.base, &aa, b)?;
                check.test(via.as_ref() == Some(&self.sources[i]), || {
                    format!("{p}: factor ({aa},{b}) gives {via:?}, canonical gives {}", self.sources[i])
                });
            }
        }
        Ok(Record::from_check(
            "transfer independent of factorization",
            "well-definedness of u(x,g)",
            check,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{ActionRule, Carrier};
    use crate::group::{Family, OreContext, SemigroupId};
    use crate::report::Status;

    fn add_nstar() -> ActionInstance {
        let ctx = OreContext::new(Family::IntAdditive, SemigroupId::NatAdditive, vec![GroupElement::Int(1)]).unwrap();
        ActionInstance::new(
            "add",
            Space::OnePoint { carrier: Carrier::PositiveNaturals },
            ctx,
            ActionRule::Shift,
        )
        .unwrap()
    }

    #[test]
    fn q_sets_and_transfer() {
        let a = add_nstar();
        assert!(q_contains(&a, &Point::Nat(2), &GroupElement::Int(-1)).unwrap());
        assert!(!q_contains(&a, &Point::Nat(2), &GroupElement::Int(-2)).unwrap());
        assert!(q_contains(&a, &Point::Infinity, &GroupElement::Int(-100)).unwrap());
        assert_eq!(transfer(&a, &Point::Nat(3), &GroupElement::Int(-2)).unwrap(), Point::Nat(1));
    }

    #[test]
    fn arrow_operations() {
        let a = add_nstar();
        let p = Arrow::new(&a, Point::Nat(3), GroupElement::Int(-2)).unwrap();
        let q = Arrow::new(&a, Point::Nat(1), GroupElement::Int(5)).unwrap();
        let pq = compose_arrows(&a, &p, &q).unwrap();
        assert_eq!(pq, Arrow { base: Point::Nat(3), label: GroupElement::Int(3) });
        assert_eq!(pq.source(&a).unwrap(), Point::Nat(6));
        let bad = Arrow::new(&a, Point::Nat(2), GroupElement::Int(1)).unwrap();
        assert!(matches!(compose_arrows(&a, &p, &bad), Err(Error::NotComposable(_))));
        assert_eq!(
            invert_arrow(&a, &p).unwrap(),
            Arrow { base: Point::Nat(1), label: GroupElement::Int(2) }
        );
    }

    #[test]
    fn orbit_and_isotropy() {
        let a = add_nstar();
        let o = orbit(&a, &Point::Nat(2), 3).unwrap();
        assert_eq!(o, (1..=5).map(Point::Nat).collect::<Vec<_>>());
        assert_eq!(orbit(&a, &Point::Infinity, 3).unwrap(), vec![Point::Infinity]);
        assert_eq!(isotropy(&a, &Point::Nat(4), 3).unwrap(), vec![GroupElement::Int(0)]);
        assert_eq!(isotropy(&a, &Point::Infinity, 2).unwrap().len(), 5);
    }

    #[test]
    fn rotation_is_not_free() {
        let ctx = OreContext::new(Family::IntAdditive, SemigroupId::NatAdditive, vec![GroupElement::Int(1)]).unwrap();
        let a = ActionInstance::new("rot", Space::finite(3), ctx, ActionRule::Rotation).unwrap();
        let f = is_topologically_free(&a, 3).unwrap();
        assert_eq!(f.verdict, TriState::False);
        assert_eq!(f.witness, Some((Point::Finite(0), GroupElement::Int(3))));
        assert!(is_topologically_free(&add_nstar(), 4).unwrap().verdict.is_true());
    }

    #[test]
    fn enumerate_counts() {
        let ctx = OreContext::new(Family::IntAdditive, SemigroupId::NatAdditive, vec![GroupElement::Int(1)]).unwrap();
        let a = ActionInstance::new("rot", Space::finite(3), ctx, ActionRule::Rotation).unwrap();
        let w = a.default_window().unwrap();
        assert_eq!(enumerate(&a, &w, 1).unwrap().len(), 9);
        assert!(enumerate(&a, &[], 1).unwrap().is_empty());

        let b = add_nstar();
        let w = vec![Point::Nat(1), Point::Nat(2), Point::Nat(3), Point::Infinity];
        let t = enumerate(&b, &w, 1).unwrap();
        // labels {-1,0,1}: 1 gets {0,1}, 2 and 3 get all three, ∞ all three
        assert_eq!(t.len(), 11);
        for rec in t.check_axioms().unwrap() {
            assert_eq!(rec.status, Status::Pass, "{rec:?}");
        }
    }
}
