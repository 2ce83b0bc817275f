//! Command-line front end: argument parsing and dispatch to the verifiers.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::calg::{self, Backend, CalgOptions};
use crate::catalog;
use crate::compactification::{check_shift_images, build_compactification_conjugacy, limit_functional};
use crate::dilation::{check_intertwining, check_reduction};
use crate::dynamics::{ActionInstance, Point, Space};
use crate::equivalence::{
    cocycle_check, verify_conjugacy, verify_coe, verify_orbit_equivalence, CoeCertificate, ConjugacyCertificate,
    GroupHom, PointMap,
};
use crate::error::{Error, Result};
use crate::group::Q;
use crate::groupoid::{enumerate, is_topologically_free, orbit};
use crate::report::{Record, Report, TriState};
use crate::syntax::{self, Certificate, SpecOptions};

pub const DEFAULT_RADIUS: usize = 3;
pub const DEFAULT_MARGIN: usize = 2;

#[derive(Debug, Parser)]
#[command(name = "goid", version, about = "Transformation groupoids of injective Ore-semigroup actions")]
pub struct Cli {
    /// Emit the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

/// Where the (first) action comes from.
#[derive(Debug, Clone, Args)]
pub struct Source {
    /// Action spec file.
    #[arg(long, conflicts_with = "name", required_unless_present = "name")]
    pub spec: Option<PathBuf>,
    /// Catalog instance name.
    #[arg(long)]
    pub name: Option<String>,
    /// Word-ball radius.
    #[arg(long)]
    pub radius: Option<usize>,
    /// Seed for sampled points and test functions.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Number of points in the truncation window.
    #[arg(long)]
    pub window: Option<usize>,
}

/// The second action and the certificate relating the two.
#[derive(Debug, Clone, Args)]
pub struct Target {
    /// Spec file of the target action.
    #[arg(long, conflicts_with = "name_b")]
    pub spec_b: Option<PathBuf>,
    /// Catalog name of the target action.
    #[arg(long)]
    pub name_b: Option<String>,
    /// Certificate file; the identity certificate when absent.
    #[arg(long)]
    pub cert: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Openness of each generator image.
    CheckEtale(Source),
    /// Truncated orbit of a point.
    Orbit {
        #[command(flatten)]
        src: Source,
        #[arg(long)]
        point: String,
    },
    /// Topological freeness.
    Freeness(Source),
    /// Truncated groupoid with its axiom checks.
    Enumerate(Source),
    /// Reduction of the dilated groupoid to X'.
    Dilate(Source),
    /// Conjugacy certificate: point map and semigroup isomorphism.
    VerifyConjugacy {
        #[command(flatten)]
        src: Source,
        #[command(flatten)]
        tgt: Target,
    },
    /// Orbit equivalence: the point map carries orbits onto orbits.
    VerifyOe {
        #[command(flatten)]
        src: Source,
        #[command(flatten)]
        tgt: Target,
    },
    /// Continuous orbit equivalence: transfer identities and cocycles.
    VerifyCoe {
        #[command(flatten)]
        src: Source,
        #[command(flatten)]
        tgt: Target,
    },
    /// Certificate to groupoid isomorphism and back.
    CoeBridge {
        #[command(flatten)]
        src: Source,
        #[command(flatten)]
        tgt: Target,
    },
    /// Matrix identities of the convolution algebra on a truncation.
    CalgCheck {
        #[command(flatten)]
        src: Source,
        #[arg(long)]
        margin: Option<usize>,
        #[arg(long)]
        backend: Option<String>,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Profile compactification and one-point conjugacy checks.
    CompactifyCheck {
        #[command(flatten)]
        src: Source,
        /// Base point x0 of the conjugacy builder.
        #[arg(long)]
        point: Option<String>,
        /// Fixed point receiving the point at infinity.
        #[arg(long)]
        fixed: Option<String>,
        /// Semigroup element whose clopen image is checked.
        #[arg(long)]
        label: Option<String>,
    },
    /// Stored expectations of a catalog instance or pair.
    Battery {
        #[arg(long)]
        name: String,
        #[arg(long, default_value_t = DEFAULT_RADIUS)]
        radius: usize,
    },
    /// Prints a catalog instance as a spec file.
    ExportSpec {
        #[arg(long)]
        name: String,
    },
}

/// A loaded action together with the bytes that identify it.
struct Loaded {
    instance: ActionInstance,
    options: SpecOptions,
    digest_input: Vec<u8>,
}

fn load(spec: Option<&Path>, name: Option<&str>) -> Result<Loaded> {
    match (spec, name) {
        (Some(p), _) => {
            let bytes = std::fs::read(p)?;
            let text = String::from_utf8(bytes.clone()).map_err(|e| Error::Invalid(format!("{}: {e}", p.display())))?;
            let spec = syntax::parse_spec_str(&text)?;
            Ok(Loaded {
                instance: spec.instance,
                options: spec.options,
                digest_input: bytes,
            })
        }
        (None, Some(n)) => Ok(Loaded {
            instance: catalog::build(n)?,
            options: SpecOptions::default(),
            digest_input: format!("catalog:{n}").into_bytes(),
        }),
        (None, None) => Err(Error::Invalid("need --spec or --name".into())),
    }
}

struct Ctx {
    a: Loaded,
    radius: usize,
    seed: u64,
    window: Vec<Point>,
}

impl Ctx {
    fn new(src: &Source) -> Result<Ctx> {
        let a = load(src.spec.as_deref(), src.name.as_deref())?;
        let radius = src.radius.or(a.options.radius).unwrap_or(DEFAULT_RADIUS);
        let seed = src.seed.or(a.options.seed).unwrap_or(0);
        let window = match src.window {
            Some(n) => a.instance.window_of_size(n)?,
            None => catalog::battery_window(&a.instance)?,
        };
        Ok(Ctx { a, radius, seed, window })
    }

    fn report(&self, command: &str, extra: &[&[u8]]) -> Report {
        let mut inputs: Vec<&[u8]> = vec![command.as_bytes(), &self.a.digest_input];
        let r = (self.radius as u64).to_le_bytes();
        let s = self.seed.to_le_bytes();
        let w = (self.window.len() as u64).to_le_bytes();
        inputs.extend([&r[..], &s[..], &w[..]]);
        inputs.extend(extra);
        Report::new(command, &inputs)
    }
}

struct Pair {
    b: Loaded,
    cert_text: Option<String>,
}

fn load_pair(ctx: &Ctx, tgt: &Target) -> Result<Pair> {
    let b = match (&tgt.spec_b, &tgt.name_b) {
        (None, None) => Loaded {
            instance: ctx.a.instance.clone(),
            options: ctx.a.options.clone(),
            digest_input: ctx.a.digest_input.clone(),
        },
        (s, n) => load(s.as_deref(), n.as_deref())?,
    };
    let cert_text = tgt.cert.as_ref().map(std::fs::read_to_string).transpose()?;
    Ok(Pair { b, cert_text })
}

impl Pair {
    fn certificate(&self, a: &ActionInstance) -> Result<Option<Certificate>> {
        self.cert_text
            .as_deref()
            .map(|t| syntax::parse_certificate_str(t, a, &self.b.instance))
            .transpose()
    }

    fn digest(&self) -> Vec<u8> {
        let mut v = self.b.digest_input.clone();
        v.extend(self.cert_text.as_deref().unwrap_or("identity").as_bytes());
        v
    }
}

fn wrong_kind(want: &str) -> Error {
    Error::Malformed(format!("expected a {want} certificate"))
}

fn coe_certificate(pair: &Pair, a: &ActionInstance) -> Result<CoeCertificate> {
    match pair.certificate(a)? {
        None => Ok(CoeCertificate::identity()),
        Some(Certificate::Coe(c)) => Ok(c),
        Some(Certificate::Conjugacy(c)) => CoeCertificate::from_conjugacy(&c, pair.b.instance.ctx.family),
        Some(_) => Err(wrong_kind("coe or conjugacy")),
    }
}

fn pair_truncations(
    ctx: &Ctx,
    pair: &Pair,
    phi: &PointMap,
) -> Result<(crate::groupoid::TruncatedGroupoid, crate::groupoid::TruncatedGroupoid)> {
    let wb = ctx.window.iter().map(|x| phi.apply(x)).collect::<Result<Vec<_>>>()?;
    Ok((
        enumerate(&ctx.a.instance, &ctx.window, ctx.radius)?,
        enumerate(&pair.b.instance, &wb, ctx.radius)?,
    ))
}

fn etale_records(a: &ActionInstance) -> Result<Vec<Record>> {
    let mut out = Vec::new();
    for g in &a.ctx.generators {
        if !a.ctx.in_semigroup(g)? {
            continue;
        }
        let t = a.image_is_open(g)?;
        out.push(Record::from_tristate(
            format!("theta_{g} has open image"),
            "etale criterion",
            t,
            true,
            Some(format!("openness of theta_{g}(X): {t}")),
            1,
        ));
    }
    Ok(out)
}

fn compactify_records(
    ctx: &Ctx,
    point: Option<&str>,
    fixed: Option<&str>,
    label: Option<&str>,
) -> Result<Vec<Record>> {
    let a = &ctx.a.instance;
    let s = a.ctx.semigroup.clone();
    let label = match label {
        Some(l) => syntax::parse_element(a.ctx.family, l)?,
        None => a
            .ctx
            .generators
            .iter()
            .find(|g| a.ctx.in_semigroup(g).unwrap_or(false) && !g.is_identity())
            .cloned()
            .unwrap_or_else(|| a.ctx.identity()),
    };
    let mut out = check_shift_images(&a.ctx, &s, &label, ctx.radius, 8)?;

    let ball = a.ctx.word_ball(2 * ctx.radius.max(1))?;
    let e = a.ctx.identity();
    let lim = limit_functional(&|g| if *g == e { Q::from_integer(1) } else { Q::from_integer(0) }, &ball);
    let ok = lim == Some(Q::from_integer(0));
    out.push(Record::from_tristate(
        "limit functional of delta_e is 0",
        "limit functional on l-infinity",
        TriState::from_bool(ok),
        true,
        Some(format!("limit = {lim:?}")),
        ball.elements.len(),
    ));

    if let Space::OnePoint { carrier } = &a.space {
        let x0 = match point {
            Some(p) => syntax::parse_point(&a.space, p)?,
            None => match carrier {
                crate::dynamics::Carrier::Semigroup(_) => Point::Elt(a.ctx.identity()),
                c => Point::Nat(c.min_nat()),
            },
        };
        let x_inf = match fixed {
            Some(p) => syntax::parse_point(&a.space, p)?,
            None => Point::Infinity,
        };
        let (recs, _) = build_compactification_conjugacy(a, &x_inf, &x0, ctx.radius)?;
        out.extend(recs);
    }
    Ok(out)
}

/// Runs a parsed command and returns its report.
pub fn dispatch(cmd: &Command) -> Result<Report> {
    Ok(match cmd {
        Command::Battery { name, radius } => catalog::run_battery(name, *radius)?,
        Command::ExportSpec { name } => {
            let a = catalog::build(name)?;
            let text = syntax::export_spec(&a)?;
            let mut rep = Report::new("export-spec", &[name.as_bytes()]);
            rep.push(Record::new("spec exported", "catalog export").pass(1).detail("bytes", text.len()));
            rep
        }
        Command::CheckEtale(src) => {
            let ctx = Ctx::new(src)?;
            let mut rep = ctx.report("check-etale", &[]);
            rep.extend(etale_records(&ctx.a.instance)?);
            rep
        }
        Command::Orbit { src, point } => {
            let ctx = Ctx::new(src)?;
            let a = &ctx.a.instance;
            let x = syntax::parse_point(&a.space, point)?;
            let pts = orbit(a, &x, ctx.radius)?;
            let shown: Vec<String> = pts.iter().map(|p| p.to_string()).collect();
            let mut rep = ctx.report("orbit", &[point.as_bytes()]);
            rep.push(
                Record::new(format!("orbit of {x}"), "orbits")
                    .pass(pts.len())
                    .detail("radius", ctx.radius)
                    .detail("size", pts.len())
                    .detail("points", shown.join(" ")),
            );
            rep
        }
        Command::Freeness(src) => {
            let ctx = Ctx::new(src)?;
            let mut rep = ctx.report("freeness", &[]);
            rep.push(is_topologically_free(&ctx.a.instance, ctx.radius)?.record(&ctx.a.instance.name));
            rep
        }
        Command::Enumerate(src) => {
            let ctx = Ctx::new(src)?;
            let t = enumerate(&ctx.a.instance, &ctx.window, ctx.radius)?;
            let mut rep = ctx.report("enumerate", &[]);
            rep.push(
                Record::new("truncated groupoid", "transformation groupoid")
                    .pass(t.len())
                    .detail("arrows", t.len())
                    .detail("window", t.window.len())
                    .detail("ball", t.ball.elements.len())
                    .detail("exact", t.is_exact()),
            );
            rep.extend(t.check_axioms()?);
            rep.push(t.check_decomposition_independence(ctx.radius + 1)?);
            rep
        }
        Command::Dilate(src) => {
            let ctx = Ctx::new(src)?;
            let a = &ctx.a.instance;
            let t = enumerate(a, &ctx.window, ctx.radius)?;
            let mut rep = ctx.report("dilate", &[]);
            rep.extend(check_reduction(&t)?);
            if a.is_homeomorphism()?.is_true() {
                rep.push(check_intertwining(a, &ctx.window, ctx.radius)?);
            }
            rep
        }
        Command::VerifyConjugacy { src, tgt } => {
            let ctx = Ctx::new(src)?;
            let pair = load_pair(&ctx, tgt)?;
            let a = &ctx.a.instance;
            let cert = match pair.certificate(a)? {
                None => ConjugacyCertificate {
                    phi: PointMap::Identity,
                    alpha: GroupHom::Identity,
                },
                Some(Certificate::Conjugacy(c)) => c,
                Some(_) => return Err(wrong_kind("conjugacy")),
            };
            let samples = a.default_samples(ctx.seed)?;
            let mut rep = ctx.report("verify-conjugacy", &[&pair.digest()]);
            rep.extend(verify_conjugacy(&cert, a, &pair.b.instance, &samples, ctx.radius)?);
            rep
        }
        Command::VerifyOe { src, tgt } => {
            let ctx = Ctx::new(src)?;
            let pair = load_pair(&ctx, tgt)?;
            let a = &ctx.a.instance;
            let phi = match pair.certificate(a)? {
                None => PointMap::Identity,
                Some(Certificate::OrbitEquivalence(p)) => p,
                Some(Certificate::Conjugacy(c)) => c.phi,
                Some(Certificate::Coe(c)) => c.phi,
            };
            let mut rep = ctx.report("verify-oe", &[&pair.digest()]);
            rep.extend(verify_orbit_equivalence(&phi, a, &pair.b.instance, &ctx.window, ctx.radius)?);
            rep
        }
        Command::VerifyCoe { src, tgt } => {
            let ctx = Ctx::new(src)?;
            let pair = load_pair(&ctx, tgt)?;
            let cert = coe_certificate(&pair, &ctx.a.instance)?;
            let (ta, tb) = pair_truncations(&ctx, &pair, &cert.phi)?;
            let mut rep = ctx.report("verify-coe", &[&pair.digest()]);
            rep.extend(verify_coe(&cert, &ta, &tb)?);
            rep.extend(cocycle_check(&cert, &ta, &tb)?);
            rep
        }
        Command::CoeBridge { src, tgt } => {
            let ctx = Ctx::new(src)?;
            let pair = load_pair(&ctx, tgt)?;
            let cert = coe_certificate(&pair, &ctx.a.instance)?;
            let (ta, tb) = pair_truncations(&ctx, &pair, &cert.phi)?;
            let mut rep = ctx.report("coe-bridge", &[&pair.digest()]);
            rep.extend(catalog::coe_round_trip(&cert, &ta, &tb)?);
            rep
        }
        Command::CalgCheck {
            src,
            margin,
            backend,
            tol,
        } => {
            let ctx = Ctx::new(src)?;
            let o = &ctx.a.options;
            let backend: Backend = backend.as_deref().or(o.backend.as_deref()).unwrap_or("exact").parse()?;
            let opts = CalgOptions {
                margin: margin.or(o.margin).unwrap_or(DEFAULT_MARGIN),
                tol: tol.or(o.tol).unwrap_or(calg::DEFAULT_TOL),
                seed: ctx.seed,
            };
            let t = enumerate(&ctx.a.instance, &ctx.window, ctx.radius)?;
            let m = (opts.margin as u64).to_le_bytes();
            let tl = opts.tol.to_le_bytes();
            let b = format!("{backend:?}");
            let mut rep = ctx.report("calg-check", &[&m, &tl, b.as_bytes()]);
            rep.extend(calg::run_all(&t, &opts, backend)?);
            rep
        }
        Command::CompactifyCheck {
            src,
            point,
            fixed,
            label,
        } => {
            let ctx = Ctx::new(src)?;
            let extra = format!("{point:?}|{fixed:?}|{label:?}");
            let mut rep = ctx.report("compactify-check", &[extra.as_bytes()]);
            rep.extend(compactify_records(&ctx, point.as_deref(), fixed.as_deref(), label.as_deref())?);
            rep
        }
    })
}

/// Parses `args`, runs the command and renders the report; returns the text and exit status.
pub fn run<I, T>(args: I) -> (String, i32)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            return (e.render().to_string(), code);
        }
    };
    if let Command::ExportSpec { name } = &cli.command {
        return match catalog::build(name).and_then(|a| syntax::export_spec(&a)) {
            Ok(text) => (text, 0),
            Err(e) => (format!("error: {e}\n"), 3),
        };
    }
    match dispatch(&cli.command) {
        Ok(rep) => {
            let text = if cli.json { rep.to_json() } else { rep.to_text() };
            (text, rep.exit_code())
        }
        Err(e) => (format!("error: {e}\n"), 3),
    }
}
