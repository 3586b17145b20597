//! Scenario files, reports, and the regression harness behind the CLI.
//!
//! A scenario is a line-oriented `key = value` file with an optional
//! `[abutment]` section; one scenario selects one task and one object.
//! Reports are emitted as JSON and CSV with fully deterministic contents:
//! every table is keyed by `BTreeMap`s downstream, so identical scenarios
//! produce identical bytes.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::Serialize;

use crate::algebra::truncated_poly;
use crate::error::{Error, Result};
use crate::ext::{bar_resolution, periodic_resolution, yoneda_product};
use crate::graded::{GradedSpace, Window};
use crate::hochschild::{cyclic_window, hochschild_bar, hochschild_small, tate_d2, CyclicVariant};
use crate::spectral::{
    forced_search, hkr_page_alpha, hkr_page_mu, AbutmentSpec, SearchReport,
};
use crate::stack::{
    alpha_p_factor, crys_bg, crys_mod_p_check, derham_bg, einfinity_space, hodge_bg, mu_p_factor,
    pgl_omega1, tp_accounting, GroupFactor,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Task {
    Ext,
    Hh,
    Cyclic,
    HodgeBg,
    DerhamBg,
    CrysBg,
    TpAccount,
    HkrForce,
    Tate,
    PglOmega1,
}

impl Task {
    pub fn parse(s: &str) -> Result<Task> {
        Ok(match s {
            "ext" => Task::Ext,
            "hh" => Task::Hh,
            "cyclic" => Task::Cyclic,
            "hodge-bg" => Task::HodgeBg,
            "derham-bg" => Task::DerhamBg,
            "crys-bg" => Task::CrysBg,
            "tp-account" => Task::TpAccount,
            "hkr-force" => Task::HkrForce,
            "tate" => Task::Tate,
            "pgl-omega1" => Task::PglOmega1,
            other => return Err(Error::Parse(format!("unknown task `{other}`"))),
        })
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Task::Ext => "ext",
            Task::Hh => "hh",
            Task::Cyclic => "cyclic",
            Task::HodgeBg => "hodge-bg",
            Task::DerhamBg => "derham-bg",
            Task::CrysBg => "crys-bg",
            Task::TpAccount => "tp-account",
            Task::HkrForce => "hkr-force",
            Task::Tate => "tate",
            Task::PglOmega1 => "pgl-omega1",
        };
        f.write_str(s)
    }
}

/// `k[var]/(var^n)` with a declared weight for the variable.
#[derive(Debug, Clone)]
pub struct AlgebraSpec {
    pub var: String,
    pub n: usize,
    pub weight: i64,
}

impl AlgebraSpec {
    fn describe(&self) -> String {
        format!("k[{v}]/({v}^{n})", v = self.var, n = self.n)
    }
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub task: Task,
    pub p: u64,
    /// group factors by name: `mu` or `alpha`
    pub groups: Vec<String>,
    pub algebra: Option<AlgebraSpec>,
    pub deg_max: i64,
    pub weight_max: i64,
    /// Witt truncation length for the crystalline tasks
    pub m: u64,
    /// rank parameter of the projective linear group
    pub n: i64,
    pub r_max: Option<i64>,
    /// u-columns retained in the cyclic truncation
    pub columns: usize,
    pub variant: Option<CyclicVariant>,
    pub abutment: Option<BTreeMap<i64, usize>>,
    pub even_torsion_free: Option<bool>,
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

fn parse_algebra(s: &str, weight: i64) -> Result<AlgebraSpec> {
    // accepted shape: k[x]/(x^n)
    let err = || Error::Parse(format!("algebra `{s}` is not of the form k[x]/(x^n)"));
    let open = s.find('[').ok_or_else(err)?;
    let close = s.find(']').ok_or_else(err)?;
    if !s.starts_with('k') || close <= open + 1 {
        return Err(err());
    }
    let var = s[open + 1..close].to_string();
    let rest = &s[close + 1..];
    let caret = rest.find('^').ok_or_else(err)?;
    let paren = rest.rfind(')').ok_or_else(err)?;
    let expect = format!("/({var}");
    if !rest.starts_with(&expect) || paren <= caret {
        return Err(err());
    }
    let n: usize = rest[caret + 1..paren]
        .parse()
        .map_err(|_| err())?;
    if n < 2 {
        return Err(Error::Parse("algebra needs exponent at least 2".into()));
    }
    Ok(AlgebraSpec { var, n, weight })
}

/// Parse a scenario file body. `name` is the file stem, echoed in reports.
pub fn parse_scenario(name: &str, text: &str) -> Result<Scenario> {
    let mut s = Scenario {
        name: name.to_string(),
        task: Task::Ext,
        p: 0,
        groups: Vec::new(),
        algebra: None,
        deg_max: 6,
        weight_max: 60,
        m: 3,
        n: 0,
        r_max: None,
        columns: 3,
        variant: None,
        abutment: None,
        even_torsion_free: None,
    };
    let mut saw_task = false;
    let mut algebra_text: Option<String> = None;
    let mut var_weight = 1i64;
    let mut in_abutment = false;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if line == "[abutment]" {
            in_abutment = true;
            s.abutment.get_or_insert_with(BTreeMap::new);
            continue;
        }
        if line.starts_with('[') {
            return Err(Error::Parse(format!(
                "line {}: unknown section {line}",
                lineno + 1
            )));
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("line {}: expected key = value", lineno + 1)))?;
        let (key, value) = (key.trim(), value.trim());
        let bad = |what: &str| Error::Parse(format!("line {}: bad {what} `{value}`", lineno + 1));
        if in_abutment {
            let deg: i64 = key.parse().map_err(|_| bad("abutment degree"))?;
            let dim: usize = value.parse().map_err(|_| bad("abutment dimension"))?;
            s.abutment.as_mut().unwrap().insert(deg, dim);
            continue;
        }
        match key {
            "task" => {
                s.task = Task::parse(value)?;
                saw_task = true;
            }
            "p" => s.p = value.parse().map_err(|_| bad("prime"))?,
            "group" => {
                s.groups = value
                    .split('x')
                    .map(|f| f.trim().to_string())
                    .collect();
                for f in &s.groups {
                    if f != "mu" && f != "alpha" {
                        return Err(Error::Parse(format!(
                            "line {}: unknown group factor `{f}`",
                            lineno + 1
                        )));
                    }
                }
            }
            "algebra" => algebra_text = Some(value.to_string()),
            "weight" => var_weight = value.parse().map_err(|_| bad("weight"))?,
            "deg_max" => s.deg_max = value.parse().map_err(|_| bad("degree bound"))?,
            "weight_max" => s.weight_max = value.parse().map_err(|_| bad("weight bound"))?,
            "m" => s.m = value.parse().map_err(|_| bad("Witt length"))?,
            "n" => s.n = value.parse().map_err(|_| bad("rank"))?,
            "r_max" => s.r_max = Some(value.parse().map_err(|_| bad("page bound"))?),
            "columns" => s.columns = value.parse().map_err(|_| bad("column count"))?,
            "variant" => {
                s.variant = Some(match value {
                    "negative-cyclic" => CyclicVariant::NegativeCyclic,
                    "periodic" => CyclicVariant::Periodic,
                    _ => return Err(bad("variant")),
                })
            }
            "even_torsion_free" => {
                s.even_torsion_free = Some(match value {
                    "true" => true,
                    "false" => false,
                    _ => return Err(bad("flag")),
                })
            }
            other => {
                return Err(Error::Parse(format!(
                    "line {}: unknown key `{other}`",
                    lineno + 1
                )))
            }
        }
    }
    if !saw_task {
        return Err(Error::Parse("missing `task`".into()));
    }
    if !is_prime(s.p) {
        return Err(Error::Parse(format!("p = {} is not prime", s.p)));
    }
    if let Some(text) = algebra_text {
        s.algebra = Some(parse_algebra(&text, var_weight)?);
    }
    if s.deg_max < 0 {
        return Err(Error::Parse("deg_max must be nonnegative".into()));
    }
    Ok(s)
}

#[derive(Debug, Clone, Copy)]
pub struct Budgets {
    /// chain/page cells materialized per computation
    pub cells: u64,
    /// search-tree branches per forced search
    pub branches: u64,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            cells: 4_000_000,
            branches: 200_000,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GradeRow {
    pub deg: i64,
    pub wedge: i64,
    pub weight: i64,
    pub dim: usize,
    pub labels: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RingRow {
    pub name: String,
    pub deg: i64,
    pub wedge: i64,
    pub weight: i64,
}

#[derive(Debug, Clone, Serialize)]
pub struct StepRow {
    pub r: i64,
    pub source: String,
    pub target: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchRow {
    pub unique: bool,
    pub patterns: Vec<Vec<StepRow>>,
    pub branches_explored: u64,
    pub branches_pruned: u64,
    pub final_dims: BTreeMap<i64, usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Echo {
    pub name: String,
    pub task: String,
    pub p: u64,
    pub object: String,
    pub deg_max: i64,
    pub weight_max: i64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub scenario: Echo,
    pub grades: Vec<GradeRow>,
    pub rings: Vec<RingRow>,
    pub search: Vec<SearchRow>,
    /// verdicts, oracle agreements, and indeterminacy markers
    pub flags: BTreeMap<String, String>,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// The `grades` table as CSV; labels are joined with `|`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("deg,wedge,weight,dim,labels\n");
        for g in &self.grades {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                g.deg,
                g.wedge,
                g.weight,
                g.dim,
                g.labels.join("|")
            ));
        }
        out
    }
}

fn grade_rows(space: &GradedSpace) -> Vec<GradeRow> {
    space
        .grades
        .iter()
        .filter(|(_, g)| g.dim > 0)
        .map(|(i, g)| GradeRow {
            deg: i.deg,
            wedge: i.wedge,
            weight: i.weight,
            dim: g.dim,
            labels: g.labels.clone(),
        })
        .collect()
}

fn search_row(r: &SearchReport) -> SearchRow {
    SearchRow {
        unique: r.unique,
        patterns: r
            .patterns
            .iter()
            .map(|p| {
                p.iter()
                    .map(|s| StepRow {
                        r: s.r,
                        source: s.generator.clone(),
                        target: s.target.clone(),
                    })
                    .collect()
            })
            .collect(),
        branches_explored: r.branches_explored,
        branches_pruned: r.branches_pruned,
        final_dims: r.final_dims.clone(),
    }
}

fn factors_of(s: &Scenario) -> Result<Vec<GroupFactor>> {
    if s.groups.is_empty() {
        return Err(Error::Precondition(format!(
            "task {} needs a `group`",
            s.task
        )));
    }
    Ok(s.groups
        .iter()
        .map(|f| {
            if f == "mu" {
                mu_p_factor(s.p)
            } else {
                alpha_p_factor(s.p)
            }
        })
        .collect())
}

fn algebra_of(s: &Scenario) -> Result<AlgebraSpec> {
    s.algebra
        .clone()
        .ok_or_else(|| Error::Precondition(format!("task {} needs an `algebra`", s.task)))
}

fn object_string(s: &Scenario) -> String {
    if let Some(a) = &s.algebra {
        return a.describe();
    }
    if !s.groups.is_empty() {
        return format!(
            "B({})",
            s.groups
                .iter()
                .map(|f| format!("{f}_{}", s.p))
                .collect::<Vec<_>>()
                .join(" x ")
        );
    }
    if s.task == Task::PglOmega1 {
        return format!("BPGL_{}", s.n);
    }
    "-".into()
}

fn run_ext(s: &Scenario, report: &mut Report) -> Result<()> {
    let a = algebra_of(s)?;
    let p = s.p;
    let len = s.deg_max as usize + 2;
    let res = periodic_resolution(p, a.n, a.weight, len);
    res.validate()?;
    res.verify_exact()?;
    let coh = res
        .hom_complex()?
        .cohomology(Window::new(0, s.deg_max, s.weight_max))?;
    let alpha: Vec<u64> = vec![1];
    let sq = yoneda_product(&res, 1, &alpha, 1, &alpha)?;
    let alpha_sq_zero = sq.iter().all(|&c| c % p == 0);
    let alpha_weight = a.weight;
    let beta_weight = a.n as i64 * a.weight;
    report.rings.push(RingRow {
        name: "alpha".into(),
        deg: 1,
        wedge: 0,
        weight: alpha_weight,
    });
    if alpha_sq_zero {
        report.rings.push(RingRow {
            name: "beta".into(),
            deg: 2,
            wedge: 0,
            weight: beta_weight,
        });
    }
    report.flags.insert(
        "alpha_squared".into(),
        if alpha_sq_zero { "zero" } else { "nonzero" }.into(),
    );
    // independent resolution through degree 6
    let bar_top = s.deg_max.min(6);
    let alg = truncated_poly(p, a.n, a.weight);
    let bar = bar_resolution(&alg, bar_top as usize + 2)?;
    let bar_coh = bar
        .hom_complex()?
        .cohomology(Window::new(0, bar_top, s.weight_max))?;
    for d in 0..=bar_top {
        let (x, y) = (coh.dim(d), bar_coh.dim(d));
        if x != y {
            return Err(Error::DimensionMismatch(format!(
                "resolution models disagree in degree {d}: {x:?} vs {y:?}"
            )));
        }
    }
    report
        .flags
        .insert("bar_oracle".into(), format!("agrees through degree {bar_top}"));
    report.grades = grade_rows(&coh.space);
    Ok(())
}

fn run_hh(s: &Scenario, budgets: &Budgets, report: &mut Report) -> Result<()> {
    let a = algebra_of(s)?;
    let window = Window::new(0, s.deg_max, s.weight_max);
    let alg = truncated_poly(s.p, a.n, a.weight);
    let bar = hochschild_bar(&alg, &window, budgets.cells)?;
    let small = hochschild_small(s.p, a.n, a.weight, &window)?;
    for d in 0..=s.deg_max {
        if bar.dim(d) != small.dim(d) {
            return Err(Error::DimensionMismatch(format!(
                "bar and periodic models disagree in degree {d}: {:?} vs {:?}",
                bar.dim(d),
                small.dim(d)
            )));
        }
    }
    report.flags.insert(
        "small_oracle".into(),
        format!("agrees through degree {}", s.deg_max),
    );
    report.grades = grade_rows(&bar.space);
    Ok(())
}

fn run_cyclic(s: &Scenario, budgets: &Budgets, report: &mut Report) -> Result<()> {
    let a = algebra_of(s)?;
    let variant = s
        .variant
        .ok_or_else(|| Error::Precondition("task cyclic needs a `variant`".into()))?;
    let alg = truncated_poly(s.p, a.n, a.weight);
    let window = Window::new(0, s.deg_max, s.weight_max);
    let hh = cyclic_window(&alg, variant, &window, s.columns, budgets.cells)?;
    let unstable: Vec<String> = hh.indeterminate.iter().map(|d| d.to_string()).collect();
    report.flags.insert(
        "indeterminate_degrees".into(),
        if unstable.is_empty() {
            "none".into()
        } else {
            unstable.join(",")
        },
    );
    report.grades = grade_rows(&hh.space);
    Ok(())
}

fn run_hodge(s: &Scenario, report: &mut Report) -> Result<()> {
    let f = factors_of(s)?;
    let ring = hodge_bg(&f, s.deg_max, s.deg_max, s.weight_max)?;
    for g in &ring.pres.generators {
        report.rings.push(RingRow {
            name: g.name.clone(),
            deg: g.s,
            wedge: g.t,
            weight: g.weight,
        });
    }
    report.grades = grade_rows(&ring.table()?);
    Ok(())
}

fn run_derham(s: &Scenario, report: &mut Report) -> Result<()> {
    let f = factors_of(s)?;
    let dr = derham_bg(&f, s.deg_max)?;
    for (name, deg, weight) in &dr.ring {
        report.rings.push(RingRow {
            name: name.clone(),
            deg: *deg,
            wedge: 0,
            weight: *weight,
        });
    }
    report.search = dr.searches.iter().map(search_row).collect();
    report.grades = grade_rows(&dr.space);
    Ok(())
}

fn torsion_label(p: u64, e: u64) -> String {
    format!("Z/{}", p.pow(e as u32))
}

fn run_crys(s: &Scenario, report: &mut Report) -> Result<()> {
    let f = factors_of(s)?;
    if s.m < 2 {
        return Err(Error::Precondition("need Witt length m >= 2".into()));
    }
    let crys = crys_bg(&f, s.m, s.deg_max + 1)?;
    for deg in 0..=s.deg_max {
        let t = crys.module(deg);
        if t.is_zero() {
            continue;
        }
        report.grades.push(GradeRow {
            deg,
            wedge: 0,
            weight: 0,
            dim: t.exponents.len(),
            labels: t.exponents.iter().map(|&e| torsion_label(s.p, e)).collect(),
        });
    }
    let dr = derham_bg(&f, s.deg_max)?;
    crys_mod_p_check(&crys, &dr.space, s.deg_max)?;
    report.flags.insert("witt_length".into(), s.m.to_string());
    report.flags.insert(
        "mod_p_identity".into(),
        format!("verified through degree {}", s.deg_max),
    );
    Ok(())
}

fn run_tp(s: &Scenario, report: &mut Report) -> Result<()> {
    let f = factors_of(s)?;
    let tp = tp_accounting(&f, s.m, s.deg_max, s.even_torsion_free)?;
    report
        .flags
        .insert("degenerate".into(), tp.degenerate.to_string());
    report.flags.insert(
        "odd_witness".into(),
        match tp.odd_witness {
            Some((d, r)) => format!("degree {d}, rank {r}"),
            None => "none".into(),
        },
    );
    report.flags.insert(
        "abutment_even_torsionfree".into(),
        tp.abutment_even_torsionfree.to_string(),
    );
    report.flags.insert(
        "split".into(),
        match tp.split {
            Some(b) => b.to_string(),
            None => "not-applicable".into(),
        },
    );
    Ok(())
}

fn single_group(s: &Scenario) -> Result<&str> {
    match s.groups.as_slice() {
        [one] => Ok(one.as_str()),
        _ => Err(Error::Precondition(format!(
            "task {} needs a single group factor",
            s.task
        ))),
    }
}

fn run_hkr_force(s: &Scenario, budgets: &Budgets, report: &mut Report) -> Result<()> {
    let group = single_group(s)?;
    let p = s.p;
    let r_max = s.r_max.unwrap_or(p as i64 + 1);
    let pres = if group == "mu" {
        hkr_page_mu(p, 2 * p as i64 + 5)
    } else {
        // room for the k[u]/(u^p) diagonal on top of deg_max, plus the guard
        hkr_page_alpha(p, s.deg_max + p as i64 - 1 + r_max)
    };
    let per_degree = s
        .abutment
        .clone()
        .ok_or_else(|| Error::Precondition("task hkr-force needs an [abutment]".into()))?;
    let found = forced_search(
        &pres,
        &AbutmentSpec::ExplicitDims { per_degree },
        r_max,
        20,
        budgets.branches,
    )?;
    let stable = einfinity_space(&pres, &found.patterns[0], r_max, s.deg_max)?;
    report.search.push(search_row(&found));
    report.grades = grade_rows(&stable);
    Ok(())
}

fn run_tate(s: &Scenario, budgets: &Budgets, report: &mut Report) -> Result<()> {
    let a = algebra_of(s)?;
    let alg = truncated_poly(s.p, a.n, a.weight);
    let window = Window::new(0, s.deg_max, s.weight_max);
    let blocks = tate_d2(&alg, &window, budgets.cells)?;
    let mut nonzero = 0usize;
    for ((deg, w), b) in &blocks {
        let rank = b.matrix.rank();
        if b.source_dim == 0 {
            continue;
        }
        report.grades.push(GradeRow {
            deg: *deg,
            wedge: 0,
            weight: *w,
            dim: rank,
            labels: vec![format!("d2: {} -> {}, rank {rank}", b.source_dim, b.target_dim)],
        });
        nonzero += (rank > 0) as usize;
    }
    report.flags.insert(
        "d2".into(),
        if nonzero == 0 {
            "zero; page degenerates".into()
        } else {
            format!("nonzero on {nonzero} (degree, weight) blocks")
        },
    );
    Ok(())
}

fn run_pgl(s: &Scenario, report: &mut Report) -> Result<()> {
    if s.n == 0 {
        return Err(Error::Precondition("task pgl-omega1 needs `n`".into()));
    }
    let coh = pgl_omega1(s.p, s.n)?;
    report.grades = grade_rows(&coh.space);
    report.flags.insert(
        "h1_h2_nonzero".into(),
        (s.n.rem_euclid(s.p as i64) == 0).to_string(),
    );
    Ok(())
}

/// Execute one scenario under the given budgets.
pub fn run(s: &Scenario, budgets: &Budgets) -> Result<Report> {
    let mut report = Report {
        scenario: Echo {
            name: s.name.clone(),
            task: s.task.to_string(),
            p: s.p,
            object: object_string(s),
            deg_max: s.deg_max,
            weight_max: s.weight_max,
        },
        grades: Vec::new(),
        rings: Vec::new(),
        search: Vec::new(),
        flags: BTreeMap::new(),
    };
    match s.task {
        Task::Ext => run_ext(s, &mut report)?,
        Task::Hh => run_hh(s, budgets, &mut report)?,
        Task::Cyclic => run_cyclic(s, budgets, &mut report)?,
        Task::HodgeBg => run_hodge(s, &mut report)?,
        Task::DerhamBg => run_derham(s, &mut report)?,
        Task::CrysBg => run_crys(s, &mut report)?,
        Task::TpAccount => run_tp(s, &mut report)?,
        Task::HkrForce => run_hkr_force(s, budgets, &mut report)?,
        Task::Tate => run_tate(s, budgets, &mut report)?,
        Task::PglOmega1 => run_pgl(s, &mut report)?,
    }
    Ok(report)
}

/// Process exit code contract shared by the CLI and the regression harness.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) => 2,
        Error::Precondition(_) | Error::Unsupported(_) => 3,
        Error::ResourceExceeded(_) => 4,
        Error::AbutmentUnreachable(_) | Error::AmbiguousPattern(_) => 5,
        _ => 1,
    }
}

/// Outcome of replaying one fixture.
#[derive(Debug, Clone)]
pub struct RegressEntry {
    pub name: String,
    /// `None` means pass; otherwise the first divergence
    pub failure: Option<String>,
}

fn first_diff(kind: &str, got: &str, want: &str) -> Option<String> {
    if got == want {
        return None;
    }
    for (i, (g, w)) in got.lines().zip(want.lines()).enumerate() {
        if g != w {
            return Some(format!(
                "{kind} line {}: got `{g}`, fixture has `{w}`",
                i + 1
            ));
        }
    }
    Some(format!(
        "{kind}: line counts differ ({} vs {})",
        got.lines().count(),
        want.lines().count()
    ))
}

/// Replay every scenario under `root/scenarios` and byte-compare the JSON and
/// CSV reports against `root/fixtures`.
pub fn regress(root: &Path, budgets: &Budgets) -> Result<Vec<RegressEntry>> {
    let dir = root.join("scenarios");
    let fixtures = root.join("fixtures");
    if !dir.is_dir() || !fixtures.is_dir() {
        return Err(Error::Precondition(format!(
            "expected {}/scenarios and {}/fixtures",
            root.display(),
            root.display()
        )));
    }
    let mut paths: Vec<_> = std::fs::read_dir(&dir)?
        .collect::<std::io::Result<Vec<_>>>()?
        .into_iter()
        .map(|e| e.path())
        .filter(|p| p.extension().is_some_and(|e| e == "scn"))
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(Error::Precondition(format!(
            "no .scn files under {}",
            dir.display()
        )));
    }
    let mut out = Vec::new();
    for path in paths {
        let stem = path.file_stem().unwrap().to_string_lossy().into_owned();
        let entry = replay_one(&path, &stem, &fixtures, budgets);
        out.push(RegressEntry {
            name: stem,
            failure: entry.err(),
        });
    }
    Ok(out)
}

fn replay_one(path: &Path, stem: &str, fixtures: &Path, budgets: &Budgets) -> std::result::Result<(), String> {
    let text = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
    let scenario = parse_scenario(stem, &text).map_err(|e| e.to_string())?;
    let report = run(&scenario, budgets).map_err(|e| e.to_string())?;
    for (ext, got) in [("json", report.to_json()), ("csv", report.to_csv())] {
        let fx = fixtures.join(format!("{stem}.{ext}"));
        let want = std::fs::read_to_string(&fx)
            .map_err(|_| format!("missing fixture {}", fx.display()))?;
        if let Some(d) = first_diff(ext, &got, &want) {
            return Err(d);
        }
    }
    Ok(())
}
