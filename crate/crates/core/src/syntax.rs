//! Text formats: action spec files and certificate files.
//!
//! Both are line-oriented: `[section]` headers followed by `key = value`
//! entries, `#` comments, blank lines ignored. Keys may repeat where a list
//! is expected. See `docs/formats.md` for the grammar.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::catalog;
use crate::dynamics::{ActionInstance, ActionRule, Carrier, Coord, Point, Space};
use crate::equivalence::{BasicOpen, Cocycle, CocycleEntry, CoeCertificate, ConjugacyCertificate, GroupHom, PointMap};
use crate::error::{Error, Result};
use crate::group::{Family, GroupElement, OreContext, SemigroupId, Q};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub key: String,
    pub value: String,
    pub line: usize,
    pub column: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Section {
    pub name: String,
    pub line: usize,
    pub entries: Vec<Entry>,
}

impl Section {
    pub fn get(&self, key: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.key == key)
    }

    pub fn all<'a>(&'a self, key: &'a str) -> impl Iterator<Item = &'a Entry> + 'a {
        self.entries.iter().filter(move |e| e.key == key)
    }

    fn require(&self, key: &str) -> Result<&Entry> {
        self.get(key).ok_or_else(|| Error::Parse {
            line: self.line,
            column: 1,
            message: format!("[{}] is missing `{key}`", self.name),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Document {
    pub sections: Vec<Section>,
    pub lines: usize,
}

fn perr(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn entry_err(e: &Entry, message: impl Into<String>) -> Error {
    perr(e.line, e.column, message)
}

impl Document {
    pub fn parse(text: &str) -> Result<Document> {
        let mut doc = Document::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            doc.lines = line;
            let body = raw.split('#').next().unwrap_or("");
            let trimmed = body.trim();
            if trimmed.is_empty() {
                continue;
            }
            let indent = body.len() - body.trim_start().len();
            if let Some(rest) = trimmed.strip_prefix('[') {
                let name = rest
                    .strip_suffix(']')
                    .ok_or_else(|| perr(line, indent + trimmed.len(), "section header is missing `]`"))?
                    .trim();
                if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-') {
                    return Err(perr(line, indent + 2, format!("bad section name `{name}`")));
                }
                if doc.sections.iter().any(|s| s.name == name) {
                    return Err(perr(line, indent + 1, format!("duplicate section [{name}]")));
                }
                doc.sections.push(Section {
                    name: name.to_string(),
                    line,
                    entries: Vec::new(),
                });
                continue;
            }
            let Some(eq) = trimmed.find('=') else {
                return Err(perr(line, indent + 1, "expected `key = value` or `[section]`"));
            };
            let key = trimmed[..eq].trim();
            if key.is_empty() {
                return Err(perr(line, indent + 1, "empty key"));
            }
            let after = &trimmed[eq + 1..];
            let value = after.trim();
            let column = indent + eq + 2 + (after.len() - after.trim_start().len());
            let Some(section) = doc.sections.last_mut() else {
                return Err(perr(line, indent + 1, "entry before the first section"));
            };
            section.entries.push(Entry {
                key: key.to_string(),
                value: value.to_string(),
                line,
                column,
            });
        }
        Ok(doc)
    }

    pub fn section(&self, name: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.name == name)
    }

    /// The section, or an error located where it was expected.
    fn require(&self, name: &str, after: &[&str]) -> Result<&Section> {
        if let Some(s) = self.section(name) {
            return Ok(s);
        }
        // point at the header that sits where the missing section belongs
        let prev = after.iter().filter_map(|n| self.sections.iter().position(|s| s.name == *n)).max();
        let (line, what) = match prev.and_then(|i| self.sections.get(i + 1)).or(if prev.is_none() { self.sections.first() } else { None }) {
            Some(s) => (s.line, format!("found [{}]", s.name)),
            None => (self.lines.max(1), "reached end of file".to_string()),
        };
        Err(perr(line, 1, format!("missing [{name}] section; {what}")))
    }
}

pub fn parse_q(s: &str) -> Option<Q> {
    s.trim().parse::<Q>().ok().filter(|q| *q.denom() != 0)
}

pub fn parse_family(s: &str, order: Option<u32>) -> Option<Family> {
    Some(match s.trim() {
        "int" | "int-additive" => Family::IntAdditive,
        "posrat" | "pos-rational-mult" => Family::PosRationalMult,
        "affine" | "affine-rational" => Family::AffineRational,
        "cyclic" => Family::FiniteCyclic(order.filter(|n| *n > 0)?),
        other => {
            let n = other.strip_prefix("cyclic(")?.strip_suffix(')')?.trim().parse().ok()?;
            (n > 0).then_some(Family::FiniteCyclic(n))?
        }
    })
}

pub fn parse_element(family: Family, s: &str) -> Result<GroupElement> {
    let s = s.trim();
    let bad = || Error::InvalidElement(format!("`{s}` is not an element of {family}"));
    let g = match family {
        Family::IntAdditive => GroupElement::Int(s.parse().map_err(|_| bad())?),
        Family::PosRationalMult => GroupElement::PosRat(parse_q(s).ok_or_else(bad)?),
        Family::FiniteCyclic(n) => GroupElement::cyclic(n, s.parse().map_err(|_| bad())?)?,
        Family::AffineRational => {
            let inner = s.strip_prefix("[[").ok_or_else(bad)?;
            let (row, rest) = inner.split_once(']').ok_or_else(bad)?;
            if !matches!(rest.trim(), "]" | ",[0,1]]") {
                return Err(bad());
            }
            let (a, b) = row.split_once(',').ok_or_else(bad)?;
            GroupElement::Affine {
                a: parse_q(a).ok_or_else(bad)?,
                b: parse_q(b).ok_or_else(bad)?,
            }
        }
    };
    g.validate()?;
    Ok(g)
}

/// Splits a list of elements on whitespace, keeping bracketed groups together.
pub fn split_list(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut depth = 0i32;
    for c in s.chars() {
        match c {
            '[' | '(' => depth += 1,
            ']' | ')' => depth -= 1,
            _ => {}
        }
        if (c.is_whitespace() || c == ';') && depth <= 0 {
            if !cur.is_empty() {
                out.push(std::mem::take(&mut cur));
            }
        } else {
            cur.push(c);
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

fn parse_elements(family: Family, e: &Entry) -> Result<Vec<GroupElement>> {
    split_list(&e.value)
        .iter()
        .map(|t| parse_element(family, t).map_err(|err| entry_err(e, err.to_string())))
        .collect()
}

pub fn parse_point(space: &Space, s: &str) -> Result<Point> {
    let s = s.trim();
    let bad = || Error::NotInSpace(format!("`{s}`"));
    let p = match space {
        _ if matches!(s, "inf" | "∞") && matches!(space, Space::OnePoint { .. }) => Point::Infinity,
        Space::Finite { labels } => {
            let t = s.strip_prefix('#').unwrap_or(s);
            match t.parse::<usize>() {
                Ok(i) => Point::Finite(i),
                Err(_) => Point::Finite(labels.iter().position(|l| l == t).ok_or_else(bad)?),
            }
        }
        Space::OnePoint { carrier: Carrier::Semigroup(sg) } => {
            let t = s.strip_prefix('<').and_then(|t| t.strip_suffix('>')).unwrap_or(s);
            let fam = match sg {
                SemigroupId::NatAdditive => Family::IntAdditive,
                SemigroupId::PosIntMult => Family::PosRationalMult,
                SemigroupId::P1Affine | SemigroupId::P2Affine => Family::AffineRational,
                _ => return Err(Error::Invalid("points of this carrier need an explicit group".into())),
            };
            Point::Elt(parse_element(fam, t)?)
        }
        Space::OnePoint { .. } => Point::Nat(s.parse().map_err(|_| bad())?),
        Space::Rect => {
            let inner = s.strip_prefix('(').and_then(|t| t.strip_suffix(')')).ok_or_else(bad)?;
            let (x, y) = inner.split_once(',').ok_or_else(bad)?;
            let x = match x.trim() {
                "-inf" | "-∞" => Coord::NegInf,
                t => Coord::Finite(parse_q(t).ok_or_else(bad)?),
            };
            Point::Rect {
                x,
                y: parse_q(y).ok_or_else(bad)?,
            }
        }
    };
    if !space.contains(&p) {
        return Err(Error::NotInSpace(p.to_string()));
    }
    Ok(p)
}

/// Point syntax accepted by [`parse_point`].
pub fn format_point(p: &Point) -> String {
    match p {
        Point::Finite(i) => i.to_string(),
        Point::Elt(g) => g.to_string(),
        other => other.to_string(),
    }
}

/// Options carried by a spec file.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SpecOptions {
    pub radius: Option<usize>,
    pub margin: Option<usize>,
    pub backend: Option<String>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ActionSpec {
    pub instance: ActionInstance,
    pub options: SpecOptions,
}

fn parse_usize(e: &Entry) -> Result<usize> {
    e.value.parse().map_err(|_| entry_err(e, format!("`{}` is not a non-negative integer", e.value)))
}

fn parse_semigroup(sec: &Section, family: Family) -> Result<SemigroupId> {
    let id = sec.require("id")?;
    let base = match id.value.as_str() {
        "nat" | "nat-additive" => SemigroupId::NatAdditive,
        "posint" | "pos-int-mult" => SemigroupId::PosIntMult,
        "p1" | "p1-affine" => SemigroupId::P1Affine,
        "p2" | "p2-affine" => SemigroupId::P2Affine,
        "full" => SemigroupId::FullGroup,
        "trivial" => SemigroupId::Trivial,
        "generated" | "custom" => {
            let gens = parse_elements(family, sec.require("generators")?)?;
            let bound = sec.get("bound").map(parse_usize).transpose()?.unwrap_or(64);
            SemigroupId::Custom {
                generators: gens,
                bound,
            }
        }
        other => return Err(entry_err(id, format!("unknown semigroup `{other}`"))),
    };
    let extra: Vec<GroupElement> = sec
        .all("extra")
        .map(|e| parse_elements(family, e))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let s = if extra.is_empty() {
        base
    } else {
        SemigroupId::WithExtra {
            base: Box::new(base),
            extra,
        }
    };
    s.check_family(family).map_err(|err| entry_err(id, err.to_string()))?;
    Ok(s)
}

fn default_generators(family: Family, s: &SemigroupId) -> Option<Vec<GroupElement>> {
    match (family, s) {
        (Family::IntAdditive, _) => Some(vec![GroupElement::Int(1)]),
        (Family::PosRationalMult, _) => Some(
            catalog::MULT_GENERATORS
                .iter()
                .map(|p| GroupElement::PosRat(Q::from_integer(*p)))
                .collect(),
        ),
        (Family::FiniteCyclic(n), _) => GroupElement::cyclic(n, 1).ok().map(|g| vec![g]),
        (Family::AffineRational, _) => None,
    }
}

/// Parses a spec document; runs the action axioms on the default samples as a load gate.
pub fn parse_spec_str(text: &str) -> Result<ActionSpec> {
    let doc = Document::parse(text)?;
    let order = ["group", "semigroup", "space", "action", "options"];
    let gsec = doc.require("group", &[])?;
    let fam_e = gsec.require("family")?;
    let order_n = gsec.get("order").map(parse_usize).transpose()?.map(|n| n as u32);
    let family = parse_family(&fam_e.value, order_n)
        .ok_or_else(|| entry_err(fam_e, format!("unknown group family `{}`", fam_e.value)))?;

    let ssec = doc.require("semigroup", &order[..1])?;
    let semigroup = parse_semigroup(ssec, family)?;
    let generators = match ssec.get("generators").filter(|_| !matches!(semigroup, SemigroupId::Custom { .. })) {
        Some(e) => parse_elements(family, e)?,
        None => match &semigroup {
            SemigroupId::Custom { generators, .. } => generators.clone(),
            s => default_generators(family, s)
                .ok_or_else(|| perr(ssec.line, 1, "[semigroup] needs `generators` for this group"))?,
        },
    };
    let ctx = OreContext::new(family, semigroup.clone(), generators).map_err(|err| perr(ssec.line, 1, err.to_string()))?;

    let spsec = doc.require("space", &order[..2])?;
    let kind = spsec.require("kind")?;
    let space = match kind.value.as_str() {
        "finite" => {
            let labels: Vec<String> = match spsec.get("labels") {
                Some(e) => split_list(&e.value),
                None => {
                    let n = parse_usize(spsec.require("size")?)?;
                    (0..n).map(|i| i.to_string()).collect()
                }
            };
            if labels.is_empty() {
                return Err(entry_err(kind, "finite space needs at least one point"));
            }
            Space::Finite { labels }
        }
        "onepoint" => {
            let c = spsec.require("carrier")?;
            let carrier = match c.value.as_str() {
                "nat" => Carrier::Naturals,
                "posnat" => Carrier::PositiveNaturals,
                "semigroup" => Carrier::Semigroup(semigroup.clone()),
                other => return Err(entry_err(c, format!("unknown carrier `{other}`"))),
            };
            Space::OnePoint { carrier }
        }
        "rect" => Space::Rect,
        other => return Err(entry_err(kind, format!("unknown space kind `{other}`"))),
    };

    let asec = doc.require("action", &order[..3])?;
    let rule_e = asec.require("rule")?;
    let rule = match rule_e.value.as_str() {
        "rotation" => ActionRule::Rotation,
        "shift" => ActionRule::Shift,
        "scale" => ActionRule::Scale,
        "sigma" => ActionRule::Sigma,
        "affine" => ActionRule::Affine,
        "table" => {
            let mut generators = Vec::new();
            for e in asec.all("map") {
                let (g, row) = e
                    .value
                    .split_once(':')
                    .ok_or_else(|| entry_err(e, "expected `map = <element> : <images>`"))?;
                let g = parse_element(family, g).map_err(|err| entry_err(e, err.to_string()))?;
                let row = split_list(row)
                    .iter()
                    .map(|t| parse_point(&space, t))
                    .map(|p| match p {
                        Ok(Point::Finite(i)) => Ok(i),
                        Ok(other) => Err(Error::NotInSpace(other.to_string())),
                        Err(err) => Err(err),
                    })
                    .collect::<Result<Vec<usize>>>()
                    .map_err(|err| entry_err(e, err.to_string()))?;
                generators.push((g, row));
            }
            ActionRule::Table { generators }
        }
        other => return Err(entry_err(rule_e, format!("unknown rule `{other}`"))),
    };
    let name = doc
        .section("options")
        .and_then(|o| o.get("name"))
        .map(|e| e.value.clone())
        .unwrap_or_else(|| "spec".to_string());
    let instance = ActionInstance::new(name, space, ctx, rule).map_err(|err| perr(asec.line, 1, err.to_string()))?;

    let mut options = SpecOptions::default();
    if let Some(o) = doc.section("options") {
        for e in &o.entries {
            match e.key.as_str() {
                "name" => {}
                "radius" => options.radius = Some(parse_usize(e)?),
                "margin" => options.margin = Some(parse_usize(e)?),
                "seed" => options.seed = Some(parse_usize(e)? as u64),
                "backend" => options.backend = Some(e.value.clone()),
                "tol" => options.tol = Some(e.value.parse().map_err(|_| entry_err(e, "bad tolerance"))?),
                other => return Err(entry_err(e, format!("unknown option `{other}`"))),
            }
        }
    }

    let samples = instance.default_samples(options.seed.unwrap_or(0))?;
    for rec in instance.action_axioms_report(&samples)? {
        if !rec.passed() {
            return Err(Error::Axiom {
                axiom: rec.claim.clone(),
                witness: rec.witness.clone().unwrap_or_else(|| rec.status.to_string()),
            });
        }
    }
    Ok(ActionSpec { instance, options })
}

pub fn parse_spec(path: &Path) -> Result<ActionSpec> {
    parse_spec_str(&std::fs::read_to_string(path)?)
}

fn family_text(f: Family) -> String {
    match f {
        Family::IntAdditive => "int".into(),
        Family::PosRationalMult => "posrat".into(),
        Family::AffineRational => "affine".into(),
        Family::FiniteCyclic(n) => format!("cyclic({n})"),
    }
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn semigroup_lines(s: &SemigroupId, out: &mut String) -> Result<()> {
    let id = match s {
        SemigroupId::NatAdditive => "nat",
        SemigroupId::PosIntMult => "posint",
        SemigroupId::P1Affine => "p1",
        SemigroupId::P2Affine => "p2",
        SemigroupId::FullGroup => "full",
        SemigroupId::Trivial => "trivial",
        SemigroupId::Custom { generators, bound } => {
            writeln!(out, "id = generated").ok();
            writeln!(out, "bound = {bound}").ok();
            writeln!(out, "generators = {}", join(generators)).ok();
            return Ok(());
        }
        SemigroupId::WithExtra { base, extra } => {
            if matches!(**base, SemigroupId::Custom { .. } | SemigroupId::WithExtra { .. }) {
                return Err(Error::Invalid("nested semigroup descriptors cannot be exported".into()));
            }
            semigroup_lines(base, out)?;
            writeln!(out, "extra = {}", join(extra)).ok();
            return Ok(());
        }
    };
    writeln!(out, "id = {id}").ok();
    Ok(())
}

/// Renders an instance in spec-file syntax.
pub fn export_spec(a: &ActionInstance) -> Result<String> {
    let mut out = String::new();
    writeln!(out, "[group]\nfamily = {}\n", family_text(a.ctx.family)).ok();
    writeln!(out, "[semigroup]").ok();
    semigroup_lines(&a.ctx.semigroup, &mut out)?;
    if !matches!(a.ctx.semigroup, SemigroupId::Custom { .. }) {
        writeln!(out, "generators = {}", join(&a.ctx.generators)).ok();
    }
    writeln!(out, "\n[space]").ok();
    match &a.space {
        Space::Finite { labels } => {
            writeln!(out, "kind = finite").ok();
            if labels.iter().enumerate().all(|(i, l)| *l == i.to_string()) {
                writeln!(out, "size = {}", labels.len()).ok();
            } else {
                writeln!(out, "labels = {}", labels.join(" ")).ok();
            }
        }
        Space::OnePoint { carrier } => {
            let c = match carrier {
                Carrier::Naturals => "nat",
                Carrier::PositiveNaturals => "posnat",
                Carrier::Semigroup(_) => "semigroup",
            };
            writeln!(out, "kind = onepoint\ncarrier = {c}").ok();
        }
        Space::Rect => {
            writeln!(out, "kind = rect").ok();
        }
    }
    writeln!(out, "\n[action]\nrule = {}", a.rule.name()).ok();
    if let ActionRule::Table { generators } = &a.rule {
        for (g, row) in generators {
            writeln!(out, "map = {g} : {}", join(row)).ok();
        }
    }
    writeln!(out, "\n[options]\nname = {}", a.name).ok();
    Ok(out)
}

/// A certificate file's contents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    Conjugacy(ConjugacyCertificate),
    OrbitEquivalence(PointMap),
    Coe(CoeCertificate),
}

fn parse_hom(e: &Entry) -> Result<GroupHom> {
    let v = e.value.trim();
    if v == "identity" {
        return Ok(GroupHom::Identity);
    }
    let arg = |head: &str| -> Option<i64> {
        let t = v.strip_prefix(head)?.trim();
        let t = t.strip_prefix('(').and_then(|t| t.strip_suffix(')')).unwrap_or(t);
        t.trim().parse().ok()
    };
    if let Some(c) = arg("scale") {
        return Ok(GroupHom::Scale(c));
    }
    if let Some(b) = arg("exp") {
        return Ok(GroupHom::Exp { base: b });
    }
    Err(entry_err(e, format!("unknown homomorphism `{v}`")))
}

fn parse_point_map(sec: &Section, a: &ActionInstance, b: &ActionInstance) -> Result<PointMap> {
    let kind = sec.get("map").map(|e| e.value.as_str()).unwrap_or("table");
    match kind {
        "identity" => Ok(PointMap::Identity),
        "orbit" => {
            let base = sec.require("base")?;
            let fixed = sec.require("fixed")?;
            Ok(PointMap::Orbit {
                action: Box::new(b.clone()),
                base: parse_point(&b.space, &base.value).map_err(|err| entry_err(base, err.to_string()))?,
                fixed: parse_point(&b.space, &fixed.value).map_err(|err| entry_err(fixed, err.to_string()))?,
            })
        }
        "table" => {
            let mut t = BTreeMap::new();
            for e in sec.all("point") {
                let (x, y) = e
                    .value
                    .split_once("->")
                    .ok_or_else(|| entry_err(e, "expected `point = <x> -> <y>`"))?;
                let x = parse_point(&a.space, x).map_err(|err| entry_err(e, err.to_string()))?;
                let y = parse_point(&b.space, y).map_err(|err| entry_err(e, err.to_string()))?;
                if t.insert(x.clone(), y).is_some() {
                    return Err(entry_err(e, format!("{x} is mapped twice")));
                }
            }
            Ok(PointMap::Table(t))
        }
        other => Err(perr(sec.line, 1, format!("unknown point map `{other}`"))),
    }
}

fn parse_open(space: &Space, s: &str) -> Result<BasicOpen> {
    let words = split_list(s);
    let pts = |ws: &[String]| ws.iter().map(|w| parse_point(space, w)).collect::<Result<Vec<_>>>();
    match words.first().map(String::as_str) {
        Some("whole") if words.len() == 1 => Ok(BasicOpen::Whole),
        Some("points") => Ok(BasicOpen::Points(pts(&words[1..])?)),
        Some("cofinite") => Ok(BasicOpen::Cofinite(pts(&words[1..])?)),
        _ => Err(Error::Malformed(format!("`{s}` is not a basic open set"))),
    }
}

fn parse_cocycle(sec: &Section, space: &Space, family: Family, target: Family) -> Result<Cocycle> {
    let kind = sec.require("cocycle")?;
    let simple = |v: &str, e: &Entry| -> Result<Cocycle> {
        if v == "label" {
            Ok(Cocycle::Label)
        } else if let Some(rest) = v.strip_prefix("hom") {
            let e2 = Entry {
                value: rest.trim().to_string(),
                ..e.clone()
            };
            Ok(Cocycle::Hom(parse_hom(&e2)?))
        } else {
            Err(entry_err(e, format!("unknown cocycle `{v}`")))
        }
    };
    match kind.value.as_str() {
        "table" => {
            let mut entries = Vec::new();
            for e in sec.all("entry") {
                let parts: Vec<&str> = e.value.split('|').collect();
                let [open, label, value] = parts[..] else {
                    return Err(entry_err(e, "expected `entry = <open set> | <label> | <value>`"));
                };
                let wrap = |err: Error| entry_err(e, err.to_string());
                entries.push(CocycleEntry {
                    domain: parse_open(space, open).map_err(wrap)?,
                    label: parse_element(family, label).map_err(wrap)?,
                    value: parse_element(target, value).map_err(wrap)?,
                });
            }
            let fallback = match sec.get("fallback") {
                Some(e) => Some(Box::new(simple(e.value.trim(), e)?)),
                None => None,
            };
            Ok(Cocycle::Table { entries, fallback })
        }
        v => simple(v, kind),
    }
}

/// Parses a certificate between the actions `a` (source) and `b` (target).
pub fn parse_certificate_str(text: &str, a: &ActionInstance, b: &ActionInstance) -> Result<Certificate> {
    let doc = Document::parse(text)?;
    let head = doc.require("certificate", &[])?;
    let kind = head.require("kind")?;
    let phi = match doc.section("phi") {
        Some(sec) => parse_point_map(sec, a, b)?,
        None => PointMap::Identity,
    };
    match kind.value.as_str() {
        "conjugacy" => {
            let alpha = match doc.section("alpha") {
                Some(sec) => parse_hom(sec.require("hom")?)?,
                None => GroupHom::Identity,
            };
            Ok(Certificate::Conjugacy(ConjugacyCertificate { phi, alpha }))
        }
        "oe" | "orbit-equivalence" => Ok(Certificate::OrbitEquivalence(phi)),
        "coe" => {
            let (fa, fb) = (a.ctx.family, b.ctx.family);
            let ca = match doc.section("a") {
                Some(sec) => parse_cocycle(sec, &a.space, fa, fb)?,
                None => Cocycle::Label,
            };
            let cb = match doc.section("b") {
                Some(sec) => parse_cocycle(sec, &b.space, fb, fa)?,
                None => Cocycle::Label,
            };
            Ok(Certificate::Coe(CoeCertificate { phi, a: ca, b: cb }))
        }
        other => Err(entry_err(kind, format!("unknown certificate kind `{other}`"))),
    }
}

pub fn parse_certificate(path: &Path, a: &ActionInstance, b: &ActionInstance) -> Result<Certificate> {
    parse_certificate_str(&std::fs::read_to_string(path)?, a, b)
}

fn point_map_lines(phi: &PointMap, out: &mut String) {
    writeln!(out, "[phi]").ok();
    match phi {
        PointMap::Identity => {
            writeln!(out, "map = identity").ok();
        }
        PointMap::Table(t) => {
            writeln!(out, "map = table").ok();
            for (x, y) in t {
                writeln!(out, "point = {} -> {}", format_point(x), format_point(y)).ok();
            }
        }
        PointMap::Orbit { base, fixed, .. } => {
            writeln!(out, "map = orbit\nbase = {}\nfixed = {}", format_point(base), format_point(fixed)).ok();
        }
    }
}

fn hom_text(h: &GroupHom) -> String {
    match h {
        GroupHom::Identity => "identity".into(),
        GroupHom::Scale(c) => format!("scale {c}"),
        GroupHom::Exp { base } => format!("exp {base}"),
    }
}

fn simple_cocycle_text(c: &Cocycle) -> Result<String> {
    match c {
        Cocycle::Label => Ok("label".into()),
        Cocycle::Hom(h) => Ok(format!("hom {}", hom_text(h))),
        Cocycle::Table { .. } => Err(Error::Invalid("nested cocycle tables cannot be exported".into())),
    }
}

fn open_text(o: &BasicOpen) -> String {
    let pts = |ps: &[Point]| ps.iter().map(format_point).collect::<Vec<_>>().join(" ");
    match o {
        BasicOpen::Whole => "whole".into(),
        BasicOpen::Points(ps) => format!("points {}", pts(ps)),
        BasicOpen::Cofinite(ps) => format!("cofinite {}", pts(ps)),
    }
}

fn cocycle_lines(name: &str, c: &Cocycle, out: &mut String) -> Result<()> {
    writeln!(out, "\n[{name}]").ok();
    match c {
        Cocycle::Table { entries, fallback } => {
            writeln!(out, "cocycle = table").ok();
            for e in entries {
                writeln!(out, "entry = {} | {} | {}", open_text(&e.domain), e.label, e.value).ok();
            }
            if let Some(f) = fallback {
                writeln!(out, "fallback = {}", simple_cocycle_text(f)?).ok();
            }
        }
        other => {
            writeln!(out, "cocycle = {}", simple_cocycle_text(other)?).ok();
        }
    }
    Ok(())
}

/// Renders a certificate in certificate-file syntax.
pub fn export_certificate(c: &Certificate) -> Result<String> {
    let mut out = String::new();
    match c {
        Certificate::Conjugacy(cc) => {
            writeln!(out, "[certificate]\nkind = conjugacy\n").ok();
            point_map_lines(&cc.phi, &mut out);
            writeln!(out, "\n[alpha]\nhom = {}", hom_text(&cc.alpha)).ok();
        }
        Certificate::OrbitEquivalence(phi) => {
            writeln!(out, "[certificate]\nkind = oe\n").ok();
            point_map_lines(phi, &mut out);
        }
        Certificate::Coe(cc) => {
            writeln!(out, "[certificate]\nkind = coe\n").ok();
            point_map_lines(&cc.phi, &mut out);
            cocycle_lines("a", &cc.a, &mut out)?;
            cocycle_lines("b", &cc.b, &mut out)?;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const ADD: &str = "[group]\nfamily = int\n\n[semigroup]\nid = nat\n\n[space]\nkind = onepoint\ncarrier = posnat\n\n[action]\nrule = shift\n";

    #[test]
    fn parses_shift_spec() {
        let spec = parse_spec_str(ADD).unwrap();
        assert_eq!(spec.instance.rule, ActionRule::Shift);
        assert_eq!(spec.instance.ctx.generators, vec![GroupElement::Int(1)]);
    }

    #[test]
    fn missing_section_points_at_next_header() {
        let text = "[group]\nfamily = int\n\n[space]\nkind = onepoint\ncarrier = posnat\n";
        match parse_spec_str(text) {
            Err(Error::Parse { line, column, message }) => {
                assert_eq!((line, column), (4, 1));
                assert!(message.contains("[semigroup]"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn bad_value_column() {
        let text = ADD.replace("rule = shift", "rule = twist");
        match parse_spec_str(&text) {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (12, 8)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn elements_round_trip() {
        for (f, s) in [
            (Family::AffineRational, "[[3/2,-1],[0,1]]"),
            (Family::PosRationalMult, "2/3"),
            (Family::FiniteCyclic(5), "4"),
        ] {
            assert_eq!(parse_element(f, s).unwrap().to_string(), s);
        }
        assert!(parse_element(Family::AffineRational, "[[0,1]]").is_err());
    }
}
