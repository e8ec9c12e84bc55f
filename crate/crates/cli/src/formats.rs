//! JSON file formats and their conversion to library objects.
//!
//! References between files (`"group": "z2.json"`) are resolved relative to
//! the directory of the referring file; inline objects work everywhere a
//! path does.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use num_rational::Rational64;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use tetk_core::inertia::InertiaDecomposition;
use tetk_core::matrix::CycMatrix;
use tetk_core::rep::MatrixRep;
use tetk_core::tate::{ClassFunction, LoopClasses, TateSeries};
use tetk_core::{ActionGroupoid, Cochain, CycSum, FiniteGroup, FiniteGroupoid, GroupAction, RootOfUnity};

/// A malformed or inconsistent input file.
#[derive(Debug)]
pub struct InputError(pub String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

fn input_err(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(InputError(msg.into()))
}

/// A path to a JSON file or the object itself.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Ref<T> {
    Path(String),
    Inline(T),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupKind {
    Cyclic,
    Dihedral,
    Symmetric,
    Klein4,
    Quaternion8,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupSpec {
    Table { order: usize, table: Vec<Vec<usize>> },
    Kind { kind: GroupKind, n: Option<usize> },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ActionSpec {
    pub group: Ref<GroupSpec>,
    pub points: usize,
    pub act: Vec<Vec<usize>>,
}

/// Which groupoid a cochain lives on.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupoidSpec {
    /// `𝔹G`.
    Group(Ref<GroupSpec>),
    /// `X⫽G`.
    Action(Ref<ActionSpec>),
    /// `Λ(X⫽G)`.
    Inertia(Ref<ActionSpec>),
    /// `X^g⫽C_g` for the class with representative `rep`.
    Class { action: Ref<ActionSpec>, rep: usize },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entries {
    Dense(Vec<i64>),
    /// `"x,g1,...,gp": exponent` on an action groupoid.
    Keyed(BTreeMap<String, i64>),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CochainSpec {
    pub degree: usize,
    pub modulus: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub groupoid: Option<Ref<GroupoidSpec>>,
    pub entries: Entries,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub sparse: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExtensionSpec {
    pub base: Ref<GroupSpec>,
    pub modulus: u32,
    pub theta: Ref<CochainSpec>,
}

/// A rational written as a JSON integer or a `"p/q"` string.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coeff {
    Int(i64),
    Text(String),
}

impl Coeff {
    fn value(&self) -> Result<Rational64> {
        match self {
            Coeff::Int(i) => Ok(Rational64::from_integer(*i)),
            Coeff::Text(s) => parse_rational(s),
        }
    }
}

fn parse_rational(s: &str) -> Result<Rational64> {
    let bad = || input_err(format!("cannot read {s:?} as a rational number"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: i64 = p.trim().parse().map_err(|_| bad())?;
            let q: i64 = q.trim().parse().map_err(|_| bad())?;
            if q == 0 {
                return Err(bad());
            }
            Ok(Rational64::new(p, q))
        }
        None => Ok(Rational64::from_integer(s.trim().parse().map_err(|_| bad())?)),
    }
}

/// `Σ cᵢ ζ_Mⁱ` given by its coefficient vector.
pub fn cycsum_from_coeffs(level: u32, coeffs: &[Coeff]) -> Result<CycSum> {
    let values = coeffs.iter().map(Coeff::value).collect::<Result<Vec<_>>>()?;
    Ok(CycSum::from_coefficients(level, &values))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RepSpec {
    pub group: Ref<GroupSpec>,
    pub level: u32,
    #[serde(default)]
    pub theta: Option<Ref<CochainSpec>>,
    /// One matrix per group element; each entry is a coefficient vector.
    pub matrices: Vec<Vec<Vec<Vec<Coeff>>>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SeriesSpec {
    pub denominator: usize,
    pub level: u32,
    /// `j` ↦ class representative ↦ coefficient vector. Missing classes
    /// are zero.
    pub coefficients: BTreeMap<String, BTreeMap<String, Vec<Coeff>>>,
}

/// A groupoid together with what it was built from.
#[derive(Debug, Clone)]
pub enum LoadedGroupoid {
    Action(ActionGroupoid),
    Inertia(Arc<InertiaDecomposition>),
    Class(Arc<InertiaDecomposition>, usize),
}

impl LoadedGroupoid {
    pub fn groupoid(&self) -> &Arc<FiniteGroupoid> {
        match self {
            LoadedGroupoid::Action(ag) => &ag.groupoid,
            LoadedGroupoid::Inertia(d) => &d.inertia.groupoid,
            LoadedGroupoid::Class(d, rep) => &d.component(*rep).expect("checked on load").domain.groupoid,
        }
    }

    fn action_groupoid(&self) -> Option<&ActionGroupoid> {
        match self {
            LoadedGroupoid::Action(ag) => Some(ag),
            LoadedGroupoid::Class(d, rep) => Some(&d.component(*rep).expect("checked on load").domain),
            LoadedGroupoid::Inertia(_) => None,
        }
    }
}

/// Reads JSON files, resolving references relative to each file.
#[derive(Debug, Clone)]
pub struct Loader {
    dir: PathBuf,
}

impl Default for Loader {
    fn default() -> Self {
        Loader { dir: PathBuf::from(".") }
    }
}

/// Parses JSON text; syntax errors carry line and column.
pub fn parse_json<T: DeserializeOwned>(text: &str, origin: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| input_err(format!("{origin}: {e}")))
}

impl Loader {
    pub fn read<T: DeserializeOwned>(&self, path: &Path) -> Result<(T, Loader)> {
        let full = self.dir.join(path);
        let text = fs::read_to_string(&full).map_err(|e| input_err(format!("{}: {e}", full.display())))?;
        let value = parse_json(&text, &full.display().to_string())?;
        let dir = full.parent().map_or_else(|| PathBuf::from("."), Path::to_path_buf);
        Ok((value, Loader { dir }))
    }

    fn resolve<T: DeserializeOwned + Clone>(&self, r: &Ref<T>) -> Result<(T, Loader)> {
        match r {
            Ref::Path(p) => self.read(Path::new(p)),
            Ref::Inline(t) => Ok((t.clone(), self.clone())),
        }
    }

    pub fn group(&self, r: &Ref<GroupSpec>) -> Result<Arc<FiniteGroup>> {
        let (spec, _) = self.resolve(r)?;
        build_group(&spec).map(Arc::new)
    }

    pub fn action(&self, r: &Ref<ActionSpec>) -> Result<Arc<GroupAction>> {
        let (spec, here) = self.resolve(r)?;
        let group = here.group(&spec.group)?;
        GroupAction::new(group, spec.points, spec.act)
            .map(Arc::new)
            .map_err(|e| input_err(e.to_string()))
    }

    pub fn groupoid(&self, r: &Ref<GroupoidSpec>) -> Result<LoadedGroupoid> {
        let (spec, here) = self.resolve(r)?;
        Ok(match spec {
            GroupoidSpec::Group(g) => LoadedGroupoid::Action(ActionGroupoid::point(here.group(&g)?)),
            GroupoidSpec::Action(a) => LoadedGroupoid::Action(ActionGroupoid::new(here.action(&a)?)),
            GroupoidSpec::Inertia(a) => LoadedGroupoid::Inertia(Arc::new(InertiaDecomposition::new(here.action(&a)?))),
            GroupoidSpec::Class { action, rep } => {
                let d = Arc::new(InertiaDecomposition::new(here.action(&action)?));
                if d.component(rep).is_none() {
                    return Err(input_err(format!("{rep} is not a conjugacy class representative")));
                }
                LoadedGroupoid::Class(d, rep)
            }
        })
    }

    /// Loads a cochain. `context` supplies the groupoid when the file has
    /// none; a file that names its own groupoid wins.
    pub fn cochain(&self, r: &Ref<CochainSpec>, context: Option<&LoadedGroupoid>) -> Result<(Cochain, LoadedGroupoid)> {
        let (spec, here) = self.resolve(r)?;
        let loaded = match (&spec.groupoid, context) {
            (Some(g), _) => here.groupoid(g)?,
            (None, Some(c)) => c.clone(),
            (None, None) => return Err(input_err("the cochain names no groupoid and none was given")),
        };
        let c = build_cochain(&spec, &loaded)?;
        Ok((c, loaded))
    }

    pub fn rep(&self, r: &Ref<RepSpec>) -> Result<(MatrixRep, Option<Cochain>)> {
        let (spec, here) = self.resolve(r)?;
        let group = here.group(&spec.group)?;
        let loaded = LoadedGroupoid::Action(ActionGroupoid::point(Arc::clone(&group)));
        let theta = spec
            .theta
            .as_ref()
            .map(|t| here.cochain(t, Some(&loaded)).map(|(c, _)| c))
            .transpose()?;
        let matrices = spec
            .matrices
            .iter()
            .enumerate()
            .map(|(a, rows)| {
                let rows = rows
                    .iter()
                    .map(|row| row.iter().map(|e| cycsum_from_coeffs(spec.level, e)).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?;
                CycMatrix::from_rows(rows, spec.level).map_err(|e| input_err(format!("matrix {a}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let dim = matrices.first().map_or(0, CycMatrix::rows);
        let rep = MatrixRep::new(Arc::clone(loaded.groupoid()), vec![dim], matrices)
            .map_err(|e| input_err(e.to_string()))?;
        Ok((rep, theta))
    }
}

pub fn build_group(spec: &GroupSpec) -> Result<FiniteGroup> {
    match spec {
        GroupSpec::Table { order, table } => {
            if table.len() != *order {
                return Err(input_err(format!("order is {order} but the table has {} rows", table.len())));
            }
            FiniteGroup::from_table(table.clone()).map_err(|e| input_err(e.to_string()))
        }
        GroupSpec::Kind { kind, n } => {
            let need = |what: &str| n.ok_or_else(|| input_err(format!("a {what} group needs \"n\"")));
            Ok(match kind {
                GroupKind::Cyclic => {
                    let n = need("cyclic")?;
                    if n == 0 {
                        bail!(input_err("cyclic groups need n ≥ 1"));
                    }
                    FiniteGroup::cyclic(n)
                }
                GroupKind::Dihedral => {
                    let n = need("dihedral")?;
                    if n < 1 {
                        bail!(input_err("dihedral groups need n ≥ 1"));
                    }
                    FiniteGroup::dihedral(n)
                }
                GroupKind::Symmetric => {
                    let n = need("symmetric")?;
                    if n > 5 {
                        bail!(input_err("symmetric groups are limited to n ≤ 5"));
                    }
                    FiniteGroup::symmetric(n)
                }
                GroupKind::Klein4 => FiniteGroup::klein4(),
                GroupKind::Quaternion8 => FiniteGroup::quaternion8(),
            })
        }
    }
}

fn parse_key(key: &str) -> Result<Vec<usize>> {
    key.split(',')
        .map(|s| s.trim().parse::<usize>().map_err(|_| input_err(format!("bad tuple key {key:?}"))))
        .collect()
}

fn build_cochain(spec: &CochainSpec, loaded: &LoadedGroupoid) -> Result<Cochain> {
    let g = Arc::clone(loaded.groupoid());
    let m = spec.modulus;
    if m == 0 {
        return Err(input_err("modulus must be positive"));
    }
    let bad = |e: tetk_core::Error| input_err(e.to_string());
    match &spec.entries {
        Entries::Dense(v) => {
            let len = g.nerve(spec.degree)?.len();
            if v.len() != len && !(spec.sparse && v.len() < len) {
                return Err(input_err(format!(
                    "{} entries for {len} degree-{} tuples",
                    v.len(),
                    spec.degree
                )));
            }
            let mut values: Vec<u32> = v.iter().map(|&e| e.rem_euclid(m as i64) as u32).collect();
            values.resize(len, 0);
            Cochain::from_values(g, spec.degree, m, values).map_err(bad)
        }
        Entries::Keyed(map) => {
            let ag = loaded
                .action_groupoid()
                .ok_or_else(|| input_err("keyed entries need a group or action groupoid"))?;
            let mut sparse = BTreeMap::new();
            for (key, &e) in map {
                let parts = parse_key(key)?;
                if parts.len() != spec.degree + 1 {
                    return Err(input_err(format!("key {key:?} needs a point and {} elements", spec.degree)));
                }
                let (x, elems) = (parts[0], &parts[1..]);
                if x >= ag.action.points() || elems.iter().any(|&h| h >= ag.group().order()) {
                    return Err(input_err(format!("key {key:?} is out of range")));
                }
                let t = if spec.degree == 0 { vec![x] } else { ag.tuple(x, elems) };
                sparse.insert(t, e);
            }
            let c = Cochain::from_sparse(g, spec.degree, m, &sparse).map_err(bad)?;
            if !spec.sparse && sparse.len() != c.len() {
                return Err(input_err(format!(
                    "{} of {} entries given; set \"sparse\": true to default the rest to 0",
                    sparse.len(),
                    c.len()
                )));
            }
            Ok(c)
        }
    }
}

pub fn group_spec(g: &FiniteGroup) -> GroupSpec {
    GroupSpec::Table {
        order: g.order(),
        table: g.table(),
    }
}

pub fn action_spec(a: &GroupAction) -> ActionSpec {
    ActionSpec {
        group: Ref::Inline(group_spec(a.group())),
        points: a.points(),
        act: a.table(),
    }
}

/// A cochain in the dense file format.
pub fn cochain_spec(c: &Cochain, groupoid: Option<GroupoidSpec>) -> CochainSpec {
    CochainSpec {
        degree: c.degree(),
        modulus: c.modulus(),
        groupoid: groupoid.map(Ref::Inline),
        entries: Entries::Dense(c.values().iter().map(|&v| v as i64).collect()),
        sparse: false,
    }
}

pub fn rational_text(r: &Rational64) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Exact coefficients, a readable form and a 12-digit complex value.
pub fn cycsum_json(z: &CycSum) -> Value {
    json!({
        "level": z.level(),
        "coefficients": z.coefficients().iter().map(rational_text).collect::<Vec<_>>(),
        "exact": z.to_string(),
        "approx": z.render_complex(),
    })
}

pub fn root_json(r: RootOfUnity) -> Value {
    let (re, im) = r.to_complex();
    json!({
        "modulus": r.modulus(),
        "exponent": r.exponent(),
        "exact": r.to_string(),
        "approx": format!("{re:.12}{im:+.12}i"),
    })
}

/// Loads a series on the given loop classes.
pub fn build_series(spec: &SeriesSpec, classes: &Arc<LoopClasses>) -> Result<TateSeries> {
    let mut coefficients = BTreeMap::new();
    for (j, by_class) in &spec.coefficients {
        let j: i64 = j.trim().parse().map_err(|_| input_err(format!("bad power {j:?}")))?;
        let mut values = vec![CycSum::zero(spec.level); classes.len()];
        for (rep, coeffs) in by_class {
            let r: usize = rep.trim().parse().map_err(|_| input_err(format!("bad class key {rep:?}")))?;
            let c = classes
                .representatives()
                .iter()
                .position(|&x| x == r)
                .ok_or_else(|| input_err(format!("{r} is not a loop class representative")))?;
            values[c] = cycsum_from_coeffs(spec.level, coeffs)?;
        }
        coefficients.insert(j, ClassFunction::new(Arc::clone(classes), values)?);
    }
    TateSeries::new(spec.denominator, Arc::clone(classes), coefficients).map_err(|e| input_err(e.to_string()))
}

/// The series in the file format, so it can be fed back to `tate check`.
/// Exact and complex renderings sit in a parallel `rendered` map.
pub fn series_json(s: &TateSeries) -> Value {
    let reps = s.classes().representatives();
    let level = s
        .coefficients()
        .values()
        .flat_map(|f| f.values())
        .fold(1u32, |acc, v| num_integer::lcm(acc, v.level()));
    let mut coefficients = BTreeMap::new();
    let mut rendered = BTreeMap::new();
    for (j, f) in s.coefficients() {
        let nonzero = || reps.iter().zip(f.values()).filter(|(_, v)| !v.is_zero());
        let by_class: BTreeMap<String, Vec<String>> = nonzero()
            .map(|(r, v)| (r.to_string(), v.embed(level).coefficients().iter().map(rational_text).collect()))
            .collect();
        let shown: BTreeMap<String, Value> = nonzero().map(|(r, v)| (r.to_string(), cycsum_json(v))).collect();
        coefficients.insert(j.to_string(), by_class);
        rendered.insert(j.to_string(), shown);
    }
    json!({
        "denominator": s.denominator(),
        "level": level,
        "coefficients": coefficients,
        "rendered": rendered,
    })
}

pub fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("plain data serialises")
}

/// Reads a whole file as `T`.
pub fn load<T: DeserializeOwned>(path: &Path) -> Result<(T, Loader)> {
    Loader::default().read(path)
}

/// Writes a value as pretty JSON with a trailing newline.
pub fn write_json(path: &Path, v: &Value) -> Result<()> {
    let text = serde_json::to_string_pretty(v)? + "\n";
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use tetk_core::fixtures;

    fn point(g: FiniteGroup) -> LoadedGroupoid {
        LoadedGroupoid::Action(ActionGroupoid::point(Arc::new(g)))
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("-3/6").unwrap(), Rational64::new(-1, 2));
        assert_eq!(parse_rational(" 4 ").unwrap(), Rational64::from_integer(4));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(rational_text(&Rational64::new(2, -4)), "-1/2");
    }

    #[test]
    fn group_kinds_and_tables_agree() {
        let kind: GroupSpec = parse_json(r#"{"kind": "dihedral", "n": 4}"#, "t").unwrap();
        let d4 = build_group(&kind).unwrap();
        assert_eq!(d4.order(), 8);
        assert_eq!(build_group(&group_spec(&d4)).unwrap().table(), d4.table());
    }

    #[test]
    fn bad_table_is_rejected() {
        let spec: GroupSpec = parse_json(r#"{"order": 2, "table": [[0, 1], [0, 1]]}"#, "t").unwrap();
        let err = build_group(&spec).unwrap_err();
        assert!(err.downcast_ref::<InputError>().is_some(), "{err:#}");
    }

    #[test]
    fn json_errors_carry_position() {
        let err = parse_json::<GroupSpec>("{\n  \"order\": 2,,\n}", "g.json").unwrap_err();
        assert!(format!("{err:#}").contains("line 2"), "{err:#}");
    }

    #[test]
    fn keyed_and_dense_entries_agree() {
        let ctx = point(FiniteGroup::cyclic(2));
        let loader = Loader::default();
        let dense: CochainSpec =
            parse_json(r#"{"degree": 3, "modulus": 2, "entries": [0,0,0,0,0,0,0,1]}"#, "t").unwrap();
        let keyed: CochainSpec =
            parse_json(r#"{"degree": 3, "modulus": 2, "sparse": true, "entries": {"0,1,1,1": 1}}"#, "t").unwrap();
        let (a, _) = loader.cochain(&Ref::Inline(dense), Some(&ctx)).unwrap();
        let (b, _) = loader.cochain(&Ref::Inline(keyed), Some(&ctx)).unwrap();
        assert_eq!(a, b);
        assert!(a.is_cocycle().unwrap());
    }

    #[test]
    fn keyed_entries_must_be_complete_unless_sparse() {
        let ctx = point(FiniteGroup::cyclic(2));
        let spec: CochainSpec = parse_json(r#"{"degree": 1, "modulus": 2, "entries": {"0,1": 1}}"#, "t").unwrap();
        assert!(Loader::default().cochain(&Ref::Inline(spec), Some(&ctx)).is_err());
    }

    #[test]
    fn cochain_round_trip() {
        for f in fixtures::cocycles().unwrap().iter().take(12) {
            let action = action_spec(&f.decomposition.action_groupoid.action);
            let spec = cochain_spec(&f.alpha, Some(GroupoidSpec::Action(Ref::Inline(action))));
            let text = serde_json::to_string(&spec).unwrap();
            let back: CochainSpec = parse_json(&text, "t").unwrap();
            let (c, _) = Loader::default().cochain(&Ref::Inline(back), None).unwrap();
            assert_eq!(c.values(), f.alpha.values(), "{}", f.name);
        }
    }

    #[test]
    fn coefficient_vectors() {
        let z = cycsum_from_coeffs(4, &[Coeff::Int(0), Coeff::Text("1/2".into())]).unwrap();
        assert_eq!(z, CycSum::root(4, 1).scale(Rational64::new(1, 2)));
        let v = cycsum_json(&z);
        assert_eq!(v["level"], 4);
        assert_eq!(v["coefficients"][1], "1/2");
    }
}
