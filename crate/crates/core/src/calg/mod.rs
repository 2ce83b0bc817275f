//! Finite-scale matrix models of the regular representation of `C_c(X⋊P)`,
//! the semigroup crossed product corner, and the partial-action covariant
//! representation.
//!
//! Operators act fiberwise over the base point, on the span of the arrows of a
//! truncation. A product of operators whose labels have total word length `w`
//! is only compared on basis vectors `e_(x,h)` with `|h| + w ≤ radius`, where
//! truncation cannot reach; on a saturated ball every vector qualifies.

pub mod matrix;
pub mod scalar;

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dynamics::{ActionInstance, Point};
use crate::error::{Error, Result};
use crate::group::{compose, invert, GroupElement, Q};
use crate::groupoid::{q_contains, transfer_opt, Arrow, TruncatedGroupoid};
use crate::report::{Check, Record};

pub use matrix::{rank, SparseMatrix, SparseVec};
pub use scalar::Scalar;

pub const DEFAULT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    Exact,
    Float,
}

impl std::str::FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Backend::Exact),
            "float" => Ok(Backend::Float),
            other => Err(Error::Invalid(format!("unknown backend {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CalgOptions {
    pub margin: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for CalgOptions {
    fn default() -> Self {
        CalgOptions {
            margin: 2,
            tol: DEFAULT_TOL,
            seed: 0,
        }
    }
}

/// A continuous function on `X`, given symbolically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Func {
    Const(Q),
    Delta(Point),
    /// Listed values, `default` elsewhere (including `∞`).
    Table { values: BTreeMap<Point, Q>, default: Q },
    /// `χ_{X_g}`.
    Indicator(GroupElement),
    Mul(Box<Func>, Box<Func>),
    /// `x ↦ f(u(x,g))` on `X_g`, `0` elsewhere.
    Transport(GroupElement, Box<Func>),
    /// `α_m(f) = f∘θ_m`.
    Pullback(GroupElement, Box<Func>),
}

impl Func {
    pub fn eval(&self, a: &ActionInstance, x: &Point) -> Result<Q> {
        Ok(match self {
            Func::Const(c) => *c,
            Func::Delta(y) => {
                if x == y {
                    Q::from_integer(1)
                } else {
                    Q::zero()
                }
            }
            Func::Table { values, default } => values.get(x).copied().unwrap_or(*default),
            Func::Indicator(g) => {
                if q_contains(a, x, g)? {
                    Q::from_integer(1)
                } else {
                    Q::zero()
                }
            }
            Func::Mul(f, h) => f.eval(a, x)? * h.eval(a, x)?,
            Func::Transport(g, f) => match transfer_opt(a, x, g)? {
                Some(y) => f.eval(a, &y)?,
                None => Q::zero(),
            },
            Func::Pullback(m, f) => f.eval(a, &a.act(m, x)?)?,
        })
    }

    pub fn mul(self, other: Func) -> Func {
        Func::Mul(Box::new(self), Box::new(other))
    }
}

impl fmt::Display for Func {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Func::Const(c) => write!(f, "{c}"),
            Func::Delta(y) => write!(f, "delta_{y}"),
            Func::Table { values, default } => write!(f, "table({} values, else {default})", values.len()),
            Func::Indicator(g) => write!(f, "chi_X_{g}"),
            Func::Mul(a, b) => write!(f, "{a}*{b}"),
            Func::Transport(g, h) => write!(f, "V_{g}({h})"),
            Func::Pullback(m, h) => write!(f, "alpha_{m}({h})"),
        }
    }
}

pub fn lift<S: Scalar>(m: &SparseMatrix<Q>) -> SparseMatrix<S> {
    let mut out = SparseMatrix::zeros(m.n);
    for (i, row) in m.rows.iter().enumerate() {
        for (j, v) in row {
            out.set(i, *j, S::from_q(*v));
        }
    }
    out
}

/// The displayed convolution formula `(π̃(F)ξ)(x,g) = Σ_h F(u(x,g), g⁻¹h) ξ(x,h)`
/// for a function `F` on arrows, evaluated entrywise.
pub fn rep_convolution(
    t: &TruncatedGroupoid,
    f: &dyn Fn(&Point, &GroupElement) -> Result<Q>,
) -> Result<SparseMatrix<Q>> {
    let mut m = SparseMatrix::zeros(t.len());
    for x in &t.window {
        let fiber = t.arrows_at(x);
        for &i in &fiber {
            let g = &t.arrows[i].label;
            let ginv = invert(g);
            for &j in &fiber {
                let h = &t.arrows[j].label;
                m.set(i, j, f(&t.sources[i], &compose(&ginv, h)?)?);
            }
        }
    }
    Ok(m)
}

/// `π̃(f)` for `f ∈ C(X)`: multiplication by `f(u(x,g))`.
pub fn rep_function(t: &TruncatedGroupoid, f: &Func) -> Result<SparseMatrix<Q>> {
    let values = t.sources.iter().map(|s| f.eval(&t.action, s)).collect::<Result<Vec<_>>>()?;
    Ok(SparseMatrix::diagonal(values))
}

/// `π̃(u_g)`: `e_(x,kg) ↦ e_(x,k)` whenever `(x,kg)` is an arrow.
pub fn rep_indicator(t: &TruncatedGroupoid, g: &GroupElement) -> Result<SparseMatrix<Q>> {
    let mut m = SparseMatrix::zeros(t.len());
    for (i, p) in t.arrows.iter().enumerate() {
        let target = Arrow {
            base: p.base.clone(),
            label: compose(&p.label, g)?,
        };
        if let Some(j) = t.index_of(&target) {
            m.set(i, j, Q::from_integer(1));
        }
    }
    Ok(m)
}

/// `Σ π̃(f_i) π̃(u_{g_i})`.
pub fn rep_element(t: &TruncatedGroupoid, terms: &[(Func, GroupElement)]) -> Result<SparseMatrix<Q>> {
    let mut acc = SparseMatrix::zeros(t.len());
    for (f, g) in terms {
        acc = acc.add(&rep_function(t, f)?.mul(&rep_indicator(t, g)?));
    }
    Ok(acc)
}

/// `α̂_g(f)` on `X_g ∩ window`.
pub fn partial_action_apply(t: &TruncatedGroupoid, g: &GroupElement, f: &Func) -> Result<Vec<(Point, Q)>> {
    let mut out = Vec::new();
    for x in &t.window {
        if let Some(y) = transfer_opt(&t.action, x, g)? {
            out.push((x.clone(), f.eval(&t.action, &y)?));
        }
    }
    Ok(out)
}

/// Word lengths and the safe-vector rule of a truncation.
pub struct Margin<'a> {
    t: &'a TruncatedGroupoid,
}

impl<'a> Margin<'a> {
    pub fn new(t: &'a TruncatedGroupoid) -> Self {
        Margin { t }
    }

    /// Word length of `g`, or `None` when it exceeds every useful bound.
    pub fn length(&self, g: &GroupElement) -> Result<Option<usize>> {
        if let Some(l) = self.t.ball.length(g) {
            return Ok(Some(l));
        }
        if self.t.ball.saturated {
            return Ok(None);
        }
        self.t.action.ctx.word_length(g, 2 * self.t.radius)
    }

    /// Summed length of the labels, `None` if any is out of reach.
    pub fn cost(&self, labels: &[&GroupElement]) -> Result<Option<usize>> {
        let mut total = 0;
        for g in labels {
            match self.length(g)? {
                Some(l) => total += l,
                None => return Ok(None),
            }
        }
        Ok(Some(total))
    }

    pub fn safe(&self, i: usize, cost: Option<usize>) -> bool {
        if self.t.ball.saturated {
            return true;
        }
        match (cost, self.t.ball.length(&self.t.arrows[i].label)) {
            (Some(c), Some(l)) => l + c <= self.t.radius,
            _ => false,
        }
    }
}

/// Compares `lhs[0]·lhs[1]⋯` with `rhs[0]·rhs[1]⋯` on the safe basis vectors.
pub fn compare<S: Scalar>(
    t: &TruncatedGroupoid,
    lhs: &[&SparseMatrix<S>],
    rhs: &[&SparseMatrix<S>],
    cost: Option<usize>,
    tol: f64,
    what: &str,
    check: &mut Check,
) {
    let margin = Margin::new(t);
    for i in 0..t.len() {
        if !margin.safe(i, cost) {
            continue;
        }
        let e: SparseVec<S> = [(i, S::scalar_one())].into_iter().collect();
        let l = lhs.iter().rev().fold(e.clone(), |v, m| m.apply(&v));
        let r = rhs.iter().rev().fold(e, |v, m| m.apply(&v));
        let mismatch = l
            .keys()
            .chain(r.keys())
            .find(|k| {
                let a = l.get(k).cloned().unwrap_or_else(S::scalar_zero);
                let b = r.get(k).cloned().unwrap_or_else(S::scalar_zero);
                !a.close(&b, tol)
            })
            .copied();
        check.test(mismatch.is_none(), || {
            let k = mismatch.unwrap_or(0);
            let a = l.get(&k).cloned().unwrap_or_else(S::scalar_zero);
            let b = r.get(&k).cloned().unwrap_or_else(S::scalar_zero);
            format!(
                "{what}: on e{} the coefficient of e{} is {a} vs {b}",
                t.arrows[i], t.arrows[k]
            )
        });
    }
}

/// Entrywise equality of two truncated matrices.
pub fn compare_entries<S: Scalar>(a: &SparseMatrix<S>, b: &SparseMatrix<S>, tol: f64, what: &str, t: &TruncatedGroupoid, check: &mut Check) {
    let d = a.first_difference(b, tol);
    check.checked += a.n.max(1);
    if let Some((i, j, x, y)) = d {
        if check.failure.is_none() {
            check.failure = Some(format!("{what}: entry ({}, {}) is {x} vs {y}", t.arrows[i], t.arrows[j]));
        }
    }
}

/// Deltas at the first window points and one seeded rational table.
pub fn test_functions(t: &TruncatedGroupoid, seed: u64) -> Vec<Func> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<Func> = t.window.iter().take(2).map(|x| Func::Delta(x.clone())).collect();
    let values = t
        .window
        .iter()
        .filter(|x| !x.is_infinity())
        .map(|x| (x.clone(), Q::from_integer(rng.gen_range(-3..=3))))
        .collect();
    out.push(Func::Table {
        values,
        default: Q::from_integer(rng.gen_range(1..=3)),
    });
    out
}

fn tested_labels(t: &TruncatedGroupoid, margin: usize) -> Vec<GroupElement> {
    t.ball.within(margin.min(t.radius)).cloned().collect()
}

fn semigroup_labels(t: &TruncatedGroupoid, margin: usize) -> Result<Vec<GroupElement>> {
    let mut out = Vec::new();
    for g in tested_labels(t, margin) {
        if t.action.ctx.in_semigroup(&g).unwrap_or(false) {
            out.push(g);
        }
    }
    Ok(out)
}

struct Cache<'a, S> {
    t: &'a TruncatedGroupoid,
    u: BTreeMap<GroupElement, SparseMatrix<S>>,
}

impl<'a, S: Scalar> Cache<'a, S> {
    fn new(t: &'a TruncatedGroupoid) -> Self {
        Cache { t, u: BTreeMap::new() }
    }

    fn u(&mut self, g: &GroupElement) -> Result<SparseMatrix<S>> {
        if let Some(m) = self.u.get(g) {
            return Ok(m.clone());
        }
        let m = lift(&rep_indicator(self.t, g)?);
        self.u.insert(g.clone(), m.clone());
        Ok(m)
    }

    fn f(&self, f: &Func) -> Result<SparseMatrix<S>> {
        Ok(lift(&rep_function(self.t, f)?))
    }
}

fn finish(claim: &str, anchor: &str, check: Check, t: &TruncatedGroupoid, margin: usize) -> Record {
    Record::from_check(claim, anchor, check)
        .detail("radius", t.radius)
        .detail("margin", margin)
}

/// Relations satisfied by the indicator elements `u_g`.
pub fn check_indicator_relations<S: Scalar>(t: &TruncatedGroupoid, opts: &CalgOptions) -> Result<Vec<Record>> {
    let anchor = "indicator elements u_g of C_c(X x| P)";
    let tol = opts.tol;
    let margin = Margin::new(t);
    let mut c: Cache<S> = Cache::new(t);
    let labels = tested_labels(t, opts.margin);
    let p_labels = semigroup_labels(t, opts.margin)?;
    let funcs = test_functions(t, opts.seed);
    let id = SparseMatrix::<S>::identity(t.len());
    let e = t.action.ctx.identity();

    let mut unit = Check::new();
    compare_entries(&c.u(&e)?, &id, tol, "u_e", t, &mut unit);

    let mut iso = Check::new();
    let mut mult = Check::new();
    for a in &p_labels {
        let ua = c.u(a)?;
        let ua_adj = ua.adjoint();
        compare(t, &[&ua, &ua_adj], &[&id], margin.cost(&[a, a])?, tol, &format!("u_{a} u_{a}*"), &mut iso);
        for b in &p_labels {
            let ab = compose(a, b)?;
            let (ub, uab) = (c.u(b)?, c.u(&ab)?);
            let cost = margin.cost(&[a, b])?.max(margin.cost(&[&ab])?);
            compare(t, &[&ua, &ub], &[&uab], cost, tol, &format!("u_{a} u_{b} = u_{ab}"), &mut mult);
        }
    }

    let mut fact = Check::new();
    let mut adj = Check::new();
    let mut cov = Check::new();
    let mut proj = Check::new();
    let mut conj = Check::new();
    for g in &labels {
        let (a, b) = t.action.ctx.ore_decompose(g)?;
        let (ug, ua, ub) = (c.u(g)?, c.u(&a)?, c.u(&b)?);
        let ub_adj = ub.adjoint();
        let cost = margin.cost(&[&a, &b])?.max(margin.cost(&[g])?);
        compare(t, &[&ug], &[&ua, &ub_adj], cost, tol, &format!("u_{g} = u_{a} u_{b}*"), &mut fact);

        let ginv = invert(g);
        let uginv = c.u(&ginv)?;
        compare_entries(&ug.adjoint(), &uginv, tol, &format!("u_{g}* = u_{ginv}"), t, &mut adj);

        let two = margin.cost(&[g, g])?;
        let chi = c.f(&Func::Indicator(g.clone()))?;
        compare(t, &[&ug, &uginv], &[&chi], two, tol, &format!("u_{g} u_{ginv} = chi_X_{g}"), &mut proj);
        for f in &funcs {
            let pf = c.f(f)?;
            let vf = c.f(&Func::Transport(g.clone(), Box::new(f.clone())))?;
            compare(t, &[&ug, &pf], &[&vf, &ug], margin.cost(&[g])?, tol, &format!("u_{g} {f} = V_{g}({f}) u_{g}"), &mut cov);
            compare(
                t,
                &[&ug, &pf, &uginv],
                &[&vf, &ug, &uginv],
                two,
                tol,
                &format!("u_{g} {f} u_{ginv} = V_{g}({f}) u_{g} u_{ginv}"),
                &mut conj,
            );
        }
    }

    let mut out = vec![
        finish("u_e is the identity", anchor, unit, t, opts.margin),
        finish("u_a* is an isometry for a in P", anchor, iso, t, opts.margin),
        finish("u_a u_b = u_ab for a, b in P", anchor, mult, t, opts.margin),
        finish("u_g = u_a u_b* for g = ab^-1", anchor, fact, t, opts.margin),
        finish("u_g* = u_g^-1", anchor, adj, t, opts.margin),
        finish("u_g f = V_g(f) u_g", anchor, cov, t, opts.margin),
        finish("u_g u_g^-1 = chi_X_g", anchor, proj, t, opts.margin),
        finish("u_g f u_g^-1 = V_g(f) u_g u_g^-1", anchor, conj, t, opts.margin),
    ];
    if t.is_exact() {
        let gens: Vec<SparseVec<S>> = span_generators(t)?.iter().map(|m| lift::<S>(m).flatten()).collect();
        let r = rank(&gens, tol);
        let rec = Record::from_tristate(
            "C_c(X x| P) is spanned by f u_g",
            anchor,
            crate::report::TriState::from_bool(r == t.len()),
            true,
            Some(format!("rank {r}, arrows {}", t.len())),
            gens.len(),
        )
        .detail("rank", r)
        .detail("arrows", t.len());
        out.push(rec);
    }
    Ok(out)
}

/// `π̃(δ_y) π̃(u_g)` over window points `y` and ball labels `g`.
fn span_generators(t: &TruncatedGroupoid) -> Result<Vec<SparseMatrix<Q>>> {
    let mut out = Vec::new();
    for y in &t.window {
        let d = rep_function(t, &Func::Delta(y.clone()))?;
        for g in t.ball.iter() {
            out.push(d.mul(&rep_indicator(t, g)?));
        }
    }
    Ok(out)
}

/// `π(f)` on `l²(P, C(X))`, placed on the `P`-labelled arrows.
pub fn corner_pi(t: &TruncatedGroupoid, f: &Func) -> Result<SparseMatrix<Q>> {
    let mut m = SparseMatrix::zeros(t.len());
    for (i, p) in t.arrows.iter().enumerate() {
        if t.action.ctx.in_semigroup(&p.label).unwrap_or(false) {
            m.set(i, i, f.eval(&t.action, &t.action.act(&p.label, &p.base)?)?);
        }
    }
    Ok(m)
}

/// `v_m ξ(n) = ξ̃(nm⁻¹)` on the `P`-labelled arrows.
pub fn corner_v(t: &TruncatedGroupoid, m: &GroupElement) -> Result<SparseMatrix<Q>> {
    let ctx = &t.action.ctx;
    let minv = invert(m);
    let mut out = SparseMatrix::zeros(t.len());
    for (i, p) in t.arrows.iter().enumerate() {
        if !ctx.in_semigroup(&p.label).unwrap_or(false) {
            continue;
        }
        let k = compose(&p.label, &minv)?;
        if !ctx.in_semigroup(&k).unwrap_or(false) {
            continue;
        }
        if let Some(j) = t.index_of(&Arrow {
            base: p.base.clone(),
            label: k,
        }) {
            out.set(i, j, Q::from_integer(1));
        }
    }
    Ok(out)
}

/// Projection onto the `P`-labelled arrows.
pub fn corner_projection(t: &TruncatedGroupoid) -> SparseMatrix<Q> {
    let d = t
        .arrows
        .iter()
        .map(|p| {
            if t.action.ctx.in_semigroup(&p.label).unwrap_or(false) {
                Q::from_integer(1)
            } else {
                Q::zero()
            }
        })
        .collect();
    SparseMatrix::diagonal(d)
}

/// The semigroup crossed product as the corner `Q C*_r(X⋊P) Q`.
pub fn corner_checks<S: Scalar>(t: &TruncatedGroupoid, opts: &CalgOptions) -> Result<Vec<Record>> {
    let anchor = "semigroup crossed product as a corner";
    let tol = opts.tol;
    let margin = Margin::new(t);
    let mut c: Cache<S> = Cache::new(t);
    let labels = tested_labels(t, opts.margin);
    let p_labels = semigroup_labels(t, opts.margin)?;
    let funcs = test_functions(t, opts.seed);
    let q: SparseMatrix<S> = lift(&corner_projection(t));
    let v = |m: &GroupElement| -> Result<SparseMatrix<S>> { Ok(lift(&corner_v(t, m)?)) };
    let pi = |f: &Func| -> Result<SparseMatrix<S>> { Ok(lift(&corner_pi(t, f)?)) };

    let mut qproj = Check::new();
    compare_entries(&q.mul(&q), &q, tol, "Q^2 = Q", t, &mut qproj);
    compare_entries(&q.adjoint(), &q, tol, "Q* = Q", t, &mut qproj);

    let mut upi = Check::new();
    for f in &funcs {
        compare(t, &[&pi(f)?], &[&c.f(f)?, &q], Some(0), tol, &format!("U pi({f}) = pi~({f}) U"), &mut upi);
    }

    let mut uv = Check::new();
    let mut iso = Check::new();
    let mut ve = Check::new();
    let mut vmn = Check::new();
    let mut covar = Check::new();
    let mut alpha = Check::new();
    let mut mn = Check::new();
    compare_entries(&v(&t.action.ctx.identity())?, &q, tol, "v_e", t, &mut ve);
    for m in &p_labels {
        let vm = v(m)?;
        let vm_adj = vm.adjoint();
        let um_adj = c.u(m)?.adjoint();
        compare(t, &[&vm], &[&um_adj, &q], margin.cost(&[m])?, tol, &format!("U v_{m} = pi~(u_{m}*) U"), &mut uv);
        compare(t, &[&vm_adj, &vm], &[&q], margin.cost(&[m, m])?, tol, &format!("v_{m}* v_{m}"), &mut iso);
        for f in &funcs {
            let am = Func::Pullback(m.clone(), Box::new(f.clone()));
            compare(
                t,
                &[&pi(f)?, &vm],
                &[&vm, &pi(&am)?],
                margin.cost(&[m])?,
                tol,
                &format!("pi({f}) v_{m} = v_{m} pi(alpha_{m}({f}))"),
                &mut covar,
            );
        }
        for n in &p_labels {
            let vn = v(n)?;
            let nm = compose(n, m)?;
            let cost = margin.cost(&[m, n])?.max(margin.cost(&[&nm])?);
            compare(t, &[&vm, &vn], &[&v(&nm)?], cost, tol, &format!("v_{m} v_{n} = v_{nm}"), &mut vmn);

            let un = c.u(n)?.adjoint();
            let um = c.u(m)?;
            compare(
                t,
                &[&q, &um, &un, &q],
                &[&q, &um, &q, &un, &q],
                margin.cost(&[m, n])?,
                tol,
                &format!("Q u_{m} u_{n}* Q = Q u_{m} Q u_{n}* Q"),
                &mut mn,
            );
            for f in funcs.iter().take(2) {
                let ab = compose(m, n)?;
                let lhs = pi(&Func::Pullback(ab.clone(), Box::new(f.clone())))?;
                let inner = pi(&Func::Pullback(n.clone(), Box::new(f.clone())))?;
                compare(
                    t,
                    &[&lhs],
                    &[&vm_adj, &inner, &vm],
                    margin.cost(&[m, m])?,
                    tol,
                    &format!("alpha_{ab}({f}) = alpha_{m} alpha_{n}({f})"),
                    &mut alpha,
                );
            }
        }
    }

    let mut fg = Check::new();
    for g in &labels {
        let ug = c.u(g)?;
        for f in &funcs {
            let pf = c.f(f)?;
            compare(
                t,
                &[&q, &pf, &ug, &q],
                &[&q, &pf, &q, &ug, &q],
                margin.cost(&[g])?,
                tol,
                &format!("Q {f} u_{g} Q = Q {f} Q u_{g} Q"),
                &mut fg,
            );
        }
    }

    let proper = !matches!(t.action.ctx.semigroup, crate::group::SemigroupId::FullGroup);
    Ok(vec![
        finish("Q is the projection onto P-labelled arrows", anchor, qproj, t, opts.margin)
            .detail("proper subsemigroup", proper),
        finish("U pi(f) = pi~(f) U", anchor, upi, t, opts.margin),
        finish("U v_m = pi~(u_m*) U", anchor, uv, t, opts.margin),
        finish("v_e is the identity of the corner", anchor, ve, t, opts.margin),
        finish("v_m is an isometry", anchor, iso, t, opts.margin),
        finish("v_m v_n = v_nm", anchor, vmn, t, opts.margin),
        finish("pi(f) v_m = v_m pi(alpha_m(f))", anchor, covar, t, opts.margin),
        finish("alpha_ab = alpha_a alpha_b", anchor, alpha, t, opts.margin),
        finish("Q u_m u_n* Q = Q u_m Q u_n* Q", anchor, mn, t, opts.margin),
        finish("Q f u_g Q = Q f Q u_g Q", anchor, fg, t, opts.margin),
    ])
}

/// `τ(f)` on `F = {ξ : ξ(g) ∈ C(X_g)}`: multiplication by `α̂_g(f)(x)`.
pub fn covariant_tau(t: &TruncatedGroupoid, f: &Func) -> Result<SparseMatrix<Q>> {
    let mut d = Vec::with_capacity(t.len());
    for p in &t.arrows {
        d.push(Func::Transport(p.label.clone(), Box::new(f.clone())).eval(&t.action, &p.base)?);
    }
    Ok(SparseMatrix::diagonal(d))
}

/// `v_h ξ(g) = ξ(gh)` restricted to `X_g ∩ X_gh`.
pub fn covariant_v(t: &TruncatedGroupoid, h: &GroupElement) -> Result<SparseMatrix<Q>> {
    let mut m = SparseMatrix::zeros(t.len());
    for (i, p) in t.arrows.iter().enumerate() {
        let gh = compose(&p.label, h)?;
        if !(q_contains(&t.action, &p.base, &p.label)? && q_contains(&t.action, &p.base, &gh)?) {
            continue;
        }
        if let Some(j) = t.index_of(&Arrow {
            base: p.base.clone(),
            label: gh,
        }) {
            m.set(i, j, Q::from_integer(1));
        }
    }
    Ok(m)
}

/// Covariance relations of `(τ, v)` and the generator correspondence `π̃ ↔ (τ, v)`.
pub fn covariant_checks<S: Scalar>(t: &TruncatedGroupoid, opts: &CalgOptions) -> Result<Vec<Record>> {
    let anchor = "covariant representation of the partial action";
    let tol = opts.tol;
    let margin = Margin::new(t);
    let mut c: Cache<S> = Cache::new(t);
    let labels = tested_labels(t, opts.margin);
    let funcs = test_functions(t, opts.seed);
    let tau = |f: &Func| -> Result<SparseMatrix<S>> { Ok(lift(&covariant_tau(t, f)?)) };
    let mut vs: BTreeMap<GroupElement, SparseMatrix<S>> = BTreeMap::new();
    let mut v = |g: &GroupElement| -> Result<SparseMatrix<S>> {
        if let Some(m) = vs.get(g) {
            return Ok(m.clone());
        }
        let m = lift(&covariant_v(t, g)?);
        vs.insert(g.clone(), m.clone());
        Ok(m)
    };

    let mut r1 = Check::new();
    let mut r2 = Check::new();
    let mut r3 = Check::new();
    let mut psi_f = Check::new();
    let mut psi_u = Check::new();
    let mut pa = Check::new();
    for f in &funcs {
        compare_entries(&c.f(f)?, &tau(f)?, tol, &format!("Psi(pi~({f})) = tau({f})"), t, &mut psi_f);
    }
    for g in &labels {
        let ginv = invert(g);
        let (vg, vginv) = (v(g)?, v(&ginv)?);
        compare_entries(&c.u(g)?, &vg, tol, &format!("Psi(pi~(u_{g})) = v_{g}"), t, &mut psi_u);
        compare_entries(&vg.adjoint(), &vginv, tol, &format!("v_{g}* = v_{ginv}"), t, &mut r3);
        for f in &funcs {
            let fg = f.clone().mul(Func::Indicator(ginv.clone()));
            let moved = Func::Transport(g.clone(), Box::new(fg.clone()));
            compare(
                t,
                &[&vg, &tau(&fg)?, &vginv],
                &[&tau(&moved)?],
                margin.cost(&[g, g])?,
                tol,
                &format!("v_{g} tau({fg}) v_{ginv} = tau(alpha^_{g}({fg}))"),
                &mut r1,
            );
            // α̂_{g⁻¹}∘α̂_g is the identity on X_{g⁻¹} ∩ window
            let there = Func::Transport(g.clone(), Box::new(fg.clone()));
            for (x, val) in partial_action_apply(t, &ginv, &there)? {
                let want = fg.eval(&t.action, &x)?;
                pa.test(val == want, || format!("alpha^_{ginv}(alpha^_{g}({fg}))({x}) = {val} ≠ {want}"));
            }
        }
        for h in &labels {
            let gh = compose(g, h)?;
            let (vh, vgh) = (v(h)?, v(&gh)?);
            for f in &funcs {
                let fr = f
                    .clone()
                    .mul(Func::Indicator(g.clone()))
                    .mul(Func::Indicator(gh.clone()));
                let tf = tau(&fr)?;
                let cost = margin.cost(&[g, h])?.max(margin.cost(&[&gh])?);
                compare(
                    t,
                    &[&tf, &vg, &vh],
                    &[&tf, &vgh],
                    cost,
                    tol,
                    &format!("tau({fr}) (v_{g} v_{h} - v_{gh}) = 0"),
                    &mut r2,
                );
            }
        }
    }

    let mut out = vec![
        finish("v_g tau(f) v_g^-1 = tau(alpha^_g(f))", anchor, r1, t, opts.margin),
        finish("tau(f) (v_g v_h - v_gh) = 0", anchor, r2, t, opts.margin),
        finish("v_g* = v_g^-1", anchor, r3, t, opts.margin),
        finish("alpha^_g^-1 alpha^_g = id on X_g^-1", "partial action on C(X)", pa, t, opts.margin),
        finish("Psi(pi~(f)) = tau(f)", "groupoid algebra and partial crossed product", psi_f, t, opts.margin),
        finish("Psi(pi~(u_g)) = v_g", "groupoid algebra and partial crossed product", psi_u, t, opts.margin),
    ];
    if t.is_exact() {
        out.push(span_correspondence::<S>(t, tol)?);
    }
    Ok(out)
}

/// On an exact truncation: `π̃(δ_y)π̃(u_g) ↦ τ(δ_y)v_g` is a well-defined,
/// multiplicative, dimension-preserving linear map.
fn span_correspondence<S: Scalar>(t: &TruncatedGroupoid, tol: f64) -> Result<Record> {
    let anchor = "groupoid algebra and partial crossed product";
    let n2 = t.len() * t.len();
    let mut left = Vec::new();
    let mut right = Vec::new();
    for y in &t.window {
        let d = Func::Delta(y.clone());
        let (pf, tf) = (rep_function(t, &d)?, covariant_tau(t, &d)?);
        for g in t.ball.iter() {
            left.push(lift::<S>(&pf.mul(&rep_indicator(t, g)?)));
            right.push(lift::<S>(&tf.mul(&covariant_v(t, g)?)));
        }
    }
    let pair = |a: &SparseMatrix<S>, b: &SparseMatrix<S>| -> SparseVec<S> {
        let mut v = a.flatten();
        v.extend(b.flatten().into_iter().map(|(k, x)| (k + n2, x)));
        v
    };
    let lv: Vec<SparseVec<S>> = left.iter().map(|m| m.flatten()).collect();
    let rv: Vec<SparseVec<S>> = right.iter().map(|m| m.flatten()).collect();
    let mut pv: Vec<SparseVec<S>> = left.iter().zip(&right).map(|(a, b)| pair(a, b)).collect();
    let (rl, rr, rp) = (rank(&lv, tol), rank(&rv, tol), rank(&pv, tol));
    for i in 0..left.len() {
        for j in 0..left.len() {
            pv.push(pair(&left[i].mul(&left[j]), &right[i].mul(&right[j])));
        }
    }
    let rprod = rank(&pv, tol);
    let ok = rl == t.len() && rr == t.len() && rp == rl && rprod == rl;
    let witness = format!(
        "span dimensions {rl} and {rr}, graph rank {rp}, with products {rprod}, arrows {}",
        t.len()
    );
    Ok(Record::from_tristate(
        "span dimension is preserved and Psi is multiplicative",
        anchor,
        crate::report::TriState::from_bool(ok),
        true,
        Some(witness),
        pv.len(),
    )
    .detail("dimension", rl))
}

/// All three suites with the chosen backend.
pub fn run_all(t: &TruncatedGroupoid, opts: &CalgOptions, backend: Backend) -> Result<Vec<Record>> {
    match backend {
        Backend::Exact => run_with::<Q>(t, opts),
        Backend::Float => run_with::<Complex64>(t, opts),
    }
}

fn run_with<S: Scalar>(t: &TruncatedGroupoid, opts: &CalgOptions) -> Result<Vec<Record>> {
    let mut out = check_indicator_relations::<S>(t, opts)?;
    out.extend(corner_checks::<S>(t, opts)?);
    out.extend(covariant_checks::<S>(t, opts)?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{ActionRule, Space};
    use crate::group::{Family, OreContext, SemigroupId};
    use crate::groupoid::enumerate;
    use crate::report::Status;

    fn rot(n: u32) -> ActionInstance {
        let ctx = OreContext::new(
            Family::FiniteCyclic(n),
            SemigroupId::FullGroup,
            vec![GroupElement::cyclic(n, 1).unwrap()],
        )
        .unwrap();
        ActionInstance::new("rot", Space::finite(n as usize), ctx, ActionRule::Rotation).unwrap()
    }

    fn exact(n: u32) -> TruncatedGroupoid {
        let a = rot(n);
        enumerate(&a, &a.default_window().unwrap(), n as usize).unwrap()
    }

    #[test]
    fn constant_one_is_identity_and_delta_is_projection() {
        let t = exact(3);
        let one = rep_function(&t, &Func::Const(Q::from_integer(1))).unwrap();
        assert_eq!(one, SparseMatrix::identity(t.len()));
        let d = rep_function(&t, &Func::Delta(Point::Finite(0))).unwrap();
        assert_eq!(d.mul(&d), d);
        assert_eq!(d.nnz(), 3);
    }

    #[test]
    fn closed_forms_match_convolution_formula() {
        let t = exact(3);
        let g = GroupElement::cyclic(3, 1).unwrap();
        let conv = rep_convolution(&t, &|y: &Point, k: &GroupElement| {
            Ok(if k == &g && q_contains(&t.action, y, &g)? {
                Q::from_integer(1)
            } else {
                Q::zero()
            })
        })
        .unwrap();
        assert_eq!(conv, rep_indicator(&t, &g).unwrap());
    }

    #[test]
    fn rotation_suites_pass_in_both_backends() {
        let t = exact(5);
        for backend in [Backend::Exact, Backend::Float] {
            for r in run_all(&t, &CalgOptions::default(), backend).unwrap() {
                assert_eq!(r.status, Status::Pass, "{r:?}");
            }
        }
    }

    #[test]
    fn partial_action_identity_label() {
        let t = exact(3);
        let f = Func::Delta(Point::Finite(1));
        let out = partial_action_apply(&t, &t.action.ctx.identity(), &f).unwrap();
        assert_eq!(out.len(), 3);
        assert!(out.iter().all(|(x, v)| *v == f.eval(&t.action, x).unwrap()));
    }
}
