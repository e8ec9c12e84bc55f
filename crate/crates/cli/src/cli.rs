//! Argument parsing and the subcommands.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use tetk_core::cohomology::cohomology_group_with_budget;
use tetk_core::extension::order_of_lift;
use tetk_core::inertia::InertiaDecomposition;
use tetk_core::rep::verify_twisted_rep;
use tetk_core::tate::{
    assemble_tetk_element, moonshine_transform_check, rotation_check, summand_frames, twisted_regular_character,
};
use tetk_core::transgression::transgress3;
use tetk_core::{fixtures, ActionGroupoid, CentralExtension, Cochain, FiniteGroup, GroupAction};

use crate::battery;
use crate::formats::{
    self, action_spec, cochain_spec, cycsum_json, group_spec, root_json, series_json, to_value, ExtensionSpec,
    GroupSpec, GroupoidSpec, InputError, LoadedGroupoid, Loader, Ref, SeriesSpec,
};
use crate::report::{Format, Report};

#[derive(Debug, Parser)]
#[command(name = "tetk", version, about = "Exact cochain, transgression and twisted-character checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub global: Global,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub output: Format,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Cap on nerve tuples touched by a single computation.
    #[arg(long, global = true, env = "TETK_BUDGET")]
    pub budget: Option<u64>,

    /// Seed for randomised sweeps.
    #[arg(long, global = true, default_value_t = fixtures::DEFAULT_SEED)]
    pub seed: u64,

    /// Re-read input cochains with values in this larger μ_m.
    #[arg(long, global = true)]
    pub modulus: Option<u32>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Inspect a group.
    #[command(subcommand)]
    Group(GroupCmd),
    /// Check or normalise a cochain.
    #[command(subcommand)]
    Cocycle(CocycleCmd),
    /// Cohomology of 𝔹G or X⫽G with μ_m coefficients.
    Cohomology {
        #[command(flatten)]
        source: GroupoidSource,
        #[arg(long)]
        degree: usize,
    },
    /// Transgress a 3-cocycle to the inertia groupoid.
    Transgress(AlphaArgs),
    /// Central extensions.
    #[command(subcommand)]
    Extension(ExtensionCmd),
    /// Twisted representations.
    #[command(subcommand)]
    Rep(RepCmd),
    /// Series of class functions on twisted groupoids.
    #[command(subcommand)]
    Tate(TateCmd),
    /// Run the acceptance battery.
    Suite,
    /// The bundled corpus.
    #[command(subcommand)]
    Fixtures(FixturesCmd),
}

#[derive(Debug, Subcommand)]
pub enum GroupCmd {
    Show {
        #[arg(long = "in", conflicts_with = "builtin", required_unless_present = "builtin")]
        input: Option<PathBuf>,
        #[arg(long)]
        builtin: Option<String>,
    },
}

#[derive(Debug, Subcommand)]
pub enum CocycleCmd {
    Check {
        #[arg(long = "in")]
        input: PathBuf,
    },
    Normalize {
        #[arg(long = "in")]
        input: PathBuf,
        /// Also write the normalised cochain as a cochain file.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct GroupoidSource {
    /// group.json, for 𝔹G.
    #[arg(long, group = "source")]
    pub group: Option<PathBuf>,
    /// action.json, for X⫽G.
    #[arg(long, group = "source")]
    pub action: Option<PathBuf>,
    /// A bundled group, for 𝔹G.
    #[arg(long, group = "source")]
    pub builtin: Option<String>,
}

#[derive(Debug, Args)]
pub struct AlphaArgs {
    /// The 3-cocycle.
    #[arg(long)]
    pub alpha: PathBuf,
    /// The action, when the cochain file does not name its groupoid.
    #[arg(long)]
    pub action: Option<PathBuf>,
    /// Normalise α first.
    #[arg(long)]
    pub normalize: bool,
}

#[derive(Debug, Subcommand)]
pub enum ExtensionCmd {
    Build {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum RepCmd {
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum TateCmd {
    Decompose(AlphaArgs),
    Check {
        #[command(flatten)]
        alpha: AlphaArgs,
        /// Class representative g.
        #[arg(long)]
        class: usize,
        #[arg(long)]
        series: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum FixturesCmd {
    List,
    /// Write the corpus as JSON files.
    Export {
        #[arg(long)]
        dir: PathBuf,
    },
}

pub fn run(cli: &Cli) -> Result<Report> {
    let g = &cli.global;
    match &cli.command {
        Command::Group(GroupCmd::Show { input, builtin }) => group_show(input.as_deref(), builtin.as_deref()),
        Command::Cocycle(CocycleCmd::Check { input }) => cocycle_check(g, input),
        Command::Cocycle(CocycleCmd::Normalize { input, emit }) => cocycle_normalize(g, input, emit.as_deref()),
        Command::Cohomology { source, degree } => cohomology(g, source, *degree),
        Command::Transgress(a) => transgress(g, a),
        Command::Extension(ExtensionCmd::Build { input }) => extension_build(g, input),
        Command::Rep(RepCmd::Verify { input }) => rep_verify(input),
        Command::Tate(TateCmd::Decompose(a)) => tate_decompose(g, a),
        Command::Tate(TateCmd::Check { alpha, class, series }) => tate_check(g, alpha, *class, series),
        Command::Suite => Ok(suite(g.seed)),
        Command::Fixtures(FixturesCmd::List) => fixtures_list(),
        Command::Fixtures(FixturesCmd::Export { dir }) => fixtures_export(dir),
    }
}

fn input_error(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(InputError(msg.into()))
}

fn builtin_group(name: &str) -> Result<Arc<FiniteGroup>> {
    fixtures::group(name).ok_or_else(|| input_error(format!("no bundled group named {name:?}")))
}

fn group_show(input: Option<&Path>, builtin: Option<&str>) -> Result<Report> {
    let group = match (input, builtin) {
        (Some(p), _) => {
            let (spec, loader) = formats::load::<GroupSpec>(p)?;
            loader.group(&Ref::Inline(spec))?
        }
        (None, Some(name)) => builtin_group(name)?,
        (None, None) => return Err(input_error("give --in or --builtin")),
    };
    let classes = group.conjugacy_classes();
    let mut r = Report::new("group show");
    r.check("group axioms", true, "");
    r.data = json!({
        "order": group.order(),
        "label": group.label(),
        "abelian": group.is_abelian(),
        "center": group.center(),
        "classes": classes.classes,
        "element_orders": (0..group.order()).map(|a| group.element_order(a)).collect::<Vec<_>>(),
        "table": group.table(),
    });
    r.note(format!("|G| = {}, {} conjugacy classes, Z(G) = {:?}", group.order(), classes.len(), group.center()));
    Ok(r)
}

/// Applies `--modulus` to a loaded cochain.
fn with_modulus(g: &Global, c: Cochain) -> Result<Cochain> {
    match g.modulus {
        Some(m) if m != c.modulus() => c.embed(m).map_err(|e| input_error(format!("--modulus {m}: {e}"))),
        _ => Ok(c),
    }
}

fn load_cochain(g: &Global, path: &Path, context: Option<&LoadedGroupoid>) -> Result<(Cochain, LoadedGroupoid)> {
    let (c, loaded) = Loader::default().cochain(&Ref::Path(path.display().to_string()), context)?;
    Ok((with_modulus(g, c)?, loaded))
}

fn cocycle_check(g: &Global, input: &Path) -> Result<Report> {
    let (c, _) = load_cochain(g, input, None)?;
    let mut r = Report::new("cocycle check");
    let violation = c.cocycle_violation()?;
    match &violation {
        None => r.check("δc = 1", true, format!("degree {}, modulus {}", c.degree(), c.modulus())),
        Some(v) => r.check(
            "δc = 1",
            false,
            format!("δc = ζ{}^{} at tuple {:?}", c.modulus(), v.exponent, v.tuple),
        ),
    }
    let normal = c.normalization_violation();
    r.data = json!({
        "degree": c.degree(),
        "modulus": c.modulus(),
        "cocycle": violation.is_none(),
        "witness": violation.map(|v| json!({"tuple": v.tuple, "exponent": v.exponent})),
        "normalized": normal.is_none(),
        "order": c.order(),
    });
    Ok(r)
}

fn cocycle_normalize(g: &Global, input: &Path, emit: Option<&Path>) -> Result<Report> {
    let (c, _) = load_cochain(g, input, None)?;
    let (spec, _) = formats::load::<formats::CochainSpec>(input)?;
    let (normal, beta) = c.normalize()?;
    let mut r = Report::new("cocycle normalize");
    r.check("normalised", normal.is_normalized(), "");
    let gref = spec.groupoid.and_then(|g| match g {
        Ref::Inline(s) => Some(s),
        Ref::Path(_) => None,
    });
    let normal_spec = cochain_spec(&normal, gref.clone());
    if let Some(path) = emit {
        formats::write_json(path, &to_value(&normal_spec))?;
    }
    r.data = json!({
        "normalized": to_value(&normal_spec),
        "witness": to_value(&cochain_spec(&beta, gref)),
    });
    r.note("α' = α·δβ with α' trivial on every tuple containing a unit");
    Ok(r)
}

fn cohomology(g: &Global, source: &GroupoidSource, degree: usize) -> Result<Report> {
    let m = g.modulus.ok_or_else(|| input_error("cohomology needs --modulus"))?;
    let loader = Loader::default();
    let (groupoid, what) = if let Some(p) = &source.action {
        let a = loader.action(&Ref::Path(p.display().to_string()))?;
        (ActionGroupoid::new(a).groupoid, "X⫽G".to_string())
    } else {
        let group = match (&source.group, &source.builtin) {
            (Some(p), _) => loader.group(&Ref::Path(p.display().to_string()))?,
            (None, Some(name)) => builtin_group(name)?,
            (None, None) => return Err(input_error("give --group, --action or --builtin")),
        };
        (ActionGroupoid::point(group).groupoid, "𝔹G".to_string())
    };
    let budget = g.budget.unwrap_or(tetk_core::DEFAULT_TUPLE_BUDGET);
    let h = cohomology_group_with_budget(&groupoid, degree, m, budget)?;
    let mut r = Report::new("cohomology");
    r.check("computed", true, format!("order {}", h.order()));
    r.data = json!({
        "degree": degree,
        "modulus": m,
        "invariant_factors": h.invariant_factors,
        "elementary_divisors": h.elementary_divisors,
        "order": h.order(),
    });
    let factors: Vec<String> = h.invariant_factors.iter().map(|d| format!("ℤ/{d}")).collect();
    let shape = if factors.is_empty() { "0".to_string() } else { factors.join(" ⊕ ") };
    r.note(format!("H^{degree}({what}; μ_{m}) = {shape}"));
    Ok(r)
}

/// Loads α and the decomposition of the action it lives on.
fn load_alpha(g: &Global, a: &AlphaArgs) -> Result<(Cochain, Arc<InertiaDecomposition>, Value)> {
    let loader = Loader::default();
    let context = a
        .action
        .as_ref()
        .map(|p| loader.action(&Ref::Path(p.display().to_string())))
        .transpose()?
        .map(|act| LoadedGroupoid::Action(ActionGroupoid::new(act)));
    let (alpha, loaded) = load_cochain(g, &a.alpha, context.as_ref())?;
    let LoadedGroupoid::Action(ag) = loaded else {
        return Err(input_error("α must live on a group or action groupoid"));
    };
    if alpha.degree() != 3 {
        return Err(input_error(format!("α has degree {}, expected 3", alpha.degree())));
    }
    let action = to_value(&action_spec(&ag.action));
    let decomposition = Arc::new(InertiaDecomposition::from_action_groupoid(ag));
    let alpha = if a.normalize { alpha.normalize_3cocycle()?.0 } else { alpha };
    Ok((alpha, decomposition, action))
}

fn action_of(v: &Value) -> formats::ActionSpec {
    serde_json::from_value(v.clone()).expect("round trip of our own output")
}

fn transgress(g: &Global, a: &AlphaArgs) -> Result<Report> {
    let (alpha, d, action) = load_alpha(g, a)?;
    let res = transgress3(&alpha, Arc::clone(&d))?;
    let mut r = Report::new("transgress");
    r.check("θ is a 2-cocycle", res.theta.is_cocycle()?, "");
    let classes: Vec<Value> = res
        .classes
        .iter()
        .map(|c| {
            let comp = res.component(c.rep).expect("class has a component");
            let gspec = GroupoidSpec::Class {
                action: Ref::Inline(action_of(&action)),
                rep: c.rep,
            };
            let trivial = c.theta.is_trivial();
            r.note(format!(
                "θ_g for g = {}: C_g = {:?}, {}",
                c.rep,
                comp.centralizer.embedding,
                if trivial { "trivial".into() } else { format!("order {}", c.theta.order()) }
            ));
            json!({
                "rep": c.rep,
                "class": d.classes.classes[d.classes.class_of(c.rep)],
                "centralizer": comp.centralizer.embedding,
                "fixed_points": comp.restricted.points,
                "trivial": trivial,
                "theta": to_value(&cochain_spec(&c.theta, Some(gspec))),
            })
        })
        .collect();
    r.check("θ_e is trivial", res.restrict_to_centralizer(0)?.is_trivial(), "");
    let full = cochain_spec(&res.theta, Some(GroupoidSpec::Inertia(Ref::Inline(action_of(&action)))));
    r.data = json!({
        "trivial": res.theta.is_trivial(),
        "theta": to_value(&full),
        "classes": classes,
    });
    Ok(r)
}

fn extension_build(g: &Global, input: &Path) -> Result<Report> {
    let (spec, loader) = formats::load::<ExtensionSpec>(input)?;
    let base = loader.group(&spec.base)?;
    let context = LoadedGroupoid::Action(ActionGroupoid::point(Arc::clone(&base)));
    let (theta, _) = loader.cochain(&spec.theta, Some(&context))?;
    let theta = with_modulus(g, theta)?;
    if theta.modulus() != spec.modulus {
        return Err(input_error(format!(
            "θ has modulus {}, the file declares {}",
            theta.modulus(),
            spec.modulus
        )));
    }
    let ext = CentralExtension::new(Arc::clone(&base), theta)?;
    let mut r = Report::new("extension build");
    r.check("θ is a normalised 2-cocycle", true, "");
    let lifts: Vec<Value> = base
        .center()
        .into_iter()
        .map(|h| {
            let zs = ext.find_central_lifts(h).expect("h is central");
            let lo = order_of_lift(&ext, h, None);
            r.note(format!(
                "g = {h}: central lifts z ∈ {zs:?}; |g̃| = {} with h = {}, |g| = {}",
                lo.lift, lo.h, lo.base
            ));
            json!({
                "element": h,
                "central_lifts": zs,
                "lift_order": lo.lift,
                "h": lo.h,
                "base_order": lo.base,
                "divides": lo.divides(),
            })
        })
        .collect();
    let grp = ext.group();
    r.data = json!({
        "order": grp.order(),
        "abelian": grp.is_abelian(),
        "element_index": "(h, z) ↦ h·m + z",
        "table": grp.table(),
        "center_lifts": lifts,
    });
    Ok(r)
}

fn rep_verify(input: &Path) -> Result<Report> {
    let (rep, theta) = Loader::default().rep(&Ref::Path(input.display().to_string()))?;
    let theta = match theta {
        Some(t) => t,
        None => Cochain::trivial(Arc::clone(rep.groupoid()), 2, 1)?,
    };
    let violation = verify_twisted_rep(&rep, &theta)?;
    let mut r = Report::new("rep verify");
    r.check(
        "ρ(g)ρ(h) = θ(g,h)ρ(gh)",
        violation.is_none(),
        violation.as_ref().map(|v| format!("{v:?}")).unwrap_or_default(),
    );
    let characters: Vec<Value> = (0..rep.groupoid().arrows()).map(|a| cycsum_json(&rep.character_at(a))).collect();
    r.data = json!({
        "dimension": rep.dims()[0],
        "violation": violation.map(|v| format!("{v:?}")),
        "character": characters,
    });
    Ok(r)
}

fn tate_decompose(g: &Global, a: &AlphaArgs) -> Result<Report> {
    let (alpha, d, _) = load_alpha(g, a)?;
    let el = assemble_tetk_element(&alpha, d, None)?;
    let mut r = Report::new("tate decompose");
    let mut summands = Vec::new();
    for s in &el.summands {
        let chi = twisted_regular_character(&s.twisted, Arc::clone(&s.classes))?;
        let inverse_ok = s.series.sum_coefficients(1).values() == chi.values();
        let moonshine = moonshine_transform_check(&s.series, &s.lift)?;
        r.check(format!("g = {}: rotation condition", s.rep), moonshine, "");
        r.check(format!("g = {}: Σ_j V_j = χ", s.rep), inverse_ok, "");
        r.check(
            format!("g = {}: N | h·|g|", s.rep),
            s.lift_order.divides(),
            format!("N = {}, h = {}, |g| = {}", s.lift_order.lift, s.lift_order.h, s.lift_order.base),
        );
        r.note(format!(
            "g = {}: g̃ of order N = {}, V_j nonzero for j ∈ {:?}",
            s.rep,
            s.denominator(),
            s.series.coefficients().keys().collect::<Vec<_>>()
        ));
        summands.push(json!({
            "rep": s.rep,
            "modulus": s.twisted.modulus(),
            "lift": s.lift,
            "lift_order": {"lift": s.lift_order.lift, "h": s.lift_order.h, "base": s.lift_order.base},
            "loop_classes": s.classes.representatives(),
            "character": chi.values().iter().map(cycsum_json).collect::<Vec<_>>(),
            "series": series_json(&s.series),
        }));
    }
    r.data = json!({ "summands": summands });
    Ok(r)
}

fn tate_check(g: &Global, a: &AlphaArgs, class: usize, series: &Path) -> Result<Report> {
    let (alpha, d, _) = load_alpha(g, a)?;
    let res = transgress3(&alpha, d)?;
    let frames = summand_frames(&res)?;
    let fr = frames
        .iter()
        .find(|f| f.rep == class)
        .ok_or_else(|| input_error(format!("{class} is not a class representative")))?;
    let (spec, _) = formats::load::<SeriesSpec>(series)?;
    let s = formats::build_series(&spec, &fr.classes)?;
    let mut r = Report::new("tate check");
    let violation = rotation_check(&s, &fr.lift)?;
    r.check(
        "V_j(g̃·x) = ζ_N^j V_j(x)",
        violation.is_none(),
        violation
            .as_ref()
            .map(|v| format!("fails at j = {} on the class of loop {}", v.j, v.class_rep))
            .unwrap_or_default(),
    );
    r.check("translation by g̃ equals q-rotation", moonshine_transform_check(&s, &fr.lift)?, "");
    r.data = json!({
        "rep": class,
        "lift": fr.lift,
        "denominator": s.denominator(),
        "violation": violation.map(|v| json!({"j": v.j, "class_rep": v.class_rep})),
        "integral": s.is_integral(),
        "lift_value": fr.lift.iter().map(|&l| {
            let (_, z) = fr.twisted.split(l);
            root_json(tetk_core::RootOfUnity::new(fr.twisted.modulus(), z as i64))
        }).collect::<Vec<_>>(),
    });
    Ok(r)
}

pub fn suite(seed: u64) -> Report {
    let outcomes = battery::run_all(seed);
    let mut r = Report::new("suite");
    for o in &outcomes {
        r.check(format!("{:>2}. {}", o.id, o.title), o.passed, o.detail.clone());
    }
    r.data = json!({
        "seed": seed,
        "passed": outcomes.iter().filter(|o| o.passed).count(),
        "total": outcomes.len(),
    });
    r
}

fn fixtures_list() -> Result<Report> {
    let mut r = Report::new("fixtures list");
    let cocycles = fixtures::cocycles()?;
    for f in &cocycles {
        r.check(format!("{} is a cocycle", f.name), f.alpha.is_cocycle()?, "");
    }
    r.data = json!({
        "groups": fixtures::groups().into_iter().map(|(n, g)| json!({"name": n, "order": g.order()})).collect::<Vec<_>>(),
        "actions": fixtures::actions().into_iter().map(|(n, a)| json!({"name": n, "points": a.points()})).collect::<Vec<_>>(),
        "cocycles": cocycles.iter().map(|f| json!({"name": f.name, "modulus": f.alpha.modulus()})).collect::<Vec<_>>(),
    });
    Ok(r)
}

fn file_stem(name: &str) -> String {
    let mut s: String = name
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c.to_ascii_lowercase() } else { '_' })
        .collect();
    while s.contains("__") {
        s = s.replace("__", "_");
    }
    s.trim_matches('_').to_string()
}

fn fixtures_export(dir: &Path) -> Result<Report> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut written = Vec::new();
    let mut put = |name: String, v: Value| -> Result<()> {
        formats::write_json(&dir.join(&name), &v)?;
        written.push(name);
        Ok(())
    };
    for (n, g) in fixtures::groups() {
        put(format!("group_{}.json", file_stem(&n)), to_value(&group_spec(&g)))?;
    }
    for (n, a) in fixtures::actions() {
        put(format!("action_{}.json", file_stem(&n)), to_value(&action_spec(&a)))?;
    }
    for f in fixtures::cocycles()? {
        let action = action_spec(&f.decomposition.action_groupoid.action);
        let spec = cochain_spec(&f.alpha, Some(GroupoidSpec::Action(Ref::Inline(action))));
        let stem = match f.name.strip_prefix("std(").and_then(|s| s.strip_suffix(')')) {
            Some(nk) => format!("alpha_std_{}", nk.replace(',', "_")),
            None => format!("alpha_{}", file_stem(&f.name)),
        };
        put(format!("{stem}.json"), to_value(&spec))?;
    }
    let z2 = Arc::new(FiniteGroup::cyclic(2));
    put("point_z2.json".into(), to_value(&action_spec(&GroupAction::point(Arc::clone(&z2)))))?;
    let trivial = Cochain::trivial(ActionGroupoid::point(z2).groupoid, 3, 2)?;
    put("trivial.json".into(), to_value(&cochain_spec(&trivial, None)))?;
    for (name, theta) in [("z2", fixtures::z2_theta()?), ("v4_asymmetric", fixtures::v4_asymmetric_theta()?)] {
        let base = if name == "z2" { FiniteGroup::cyclic(2) } else { FiniteGroup::klein4() };
        put(
            format!("extension_{name}.json"),
            json!({
                "base": to_value(&group_spec(&base)),
                "modulus": theta.modulus(),
                "theta": to_value(&cochain_spec(&theta, None)),
            }),
        )?;
    }
    let mut r = Report::new("fixtures export");
    r.check("written", true, format!("{} files", written.len()));
    r.data = json!({ "dir": dir.display().to_string(), "files": written });
    Ok(r)
}
