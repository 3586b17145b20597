//! Weight-graded multiplicative spectral sequences: monomial pages, Leibniz
//! propagation of generator-level differentials with Koszul signs, page
//! turning through cycle/boundary bookkeeping, admissibility analysis, and
//! exhaustive search for differential patterns forced by a known abutment.

use crate::error::{Error, Result};
use crate::fp::FpMatrix;
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenKind {
    Exterior,
    Polynomial,
}

/// A multiplicative generator of a page, at position `(s, t)` with a weight.
#[derive(Debug, Clone)]
pub struct Generator {
    pub name: String,
    pub s: i64,
    pub t: i64,
    pub weight: i64,
    pub kind: GenKind,
    /// `g^truncation = 0` when set
    pub truncation: Option<i64>,
    /// invertible generator (exponents range over all of Z within the window)
    pub periodic: bool,
    /// declared permanent cycle: never a differential source, and never a
    /// bare differential target
    pub permanent: bool,
}

impl Generator {
    pub fn parity(&self) -> i64 {
        (self.s + self.t).rem_euclid(2)
    }
}

/// Rectangular `(s, t)` window with a weight band.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PageWindow {
    pub s_min: i64,
    pub s_max: i64,
    pub t_min: i64,
    pub t_max: i64,
    pub weight_min: i64,
    pub weight_max: i64,
}

impl PageWindow {
    pub fn contains(&self, s: i64, t: i64, w: i64) -> bool {
        (self.s_min..=self.s_max).contains(&s)
            && (self.t_min..=self.t_max).contains(&t)
            && (self.weight_min..=self.weight_max).contains(&w)
    }

    /// Guard band: every differential of length ≤ `g` into or out of the
    /// shrunk window stays inside the original window.
    pub fn shrink(&self, g: i64) -> PageWindow {
        PageWindow {
            s_min: self.s_min + g,
            s_max: self.s_max - g,
            t_min: self.t_min + g,
            t_max: self.t_max - g,
            weight_min: self.weight_min,
            weight_max: self.weight_max,
        }
    }
}

/// Exponent vector over the generator list.
pub type Monomial = Vec<i64>;

pub type Cell = (i64, i64, i64); // (s, t, weight)

#[derive(Debug, Clone)]
pub struct PagePresentation {
    pub modulus: u64,
    /// index of the first page on which differentials may be assigned
    pub start_page: i64,
    pub generators: Vec<Generator>,
    pub window: PageWindow,
}

/// One generator-level differential: `d_r(generators[source]) = scalar ·
/// target` (scalar is 1 in searched patterns, "up to unit").
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    pub source: usize,
    pub target: Monomial,
    pub scalar: u64,
}

impl PagePresentation {
    /// Largest reachable `Σ eᵢ·coord` in one direction, or `None` when some
    /// generator makes it unbounded (free polynomial or periodic). Bounded
    /// edges the window doesn't cut are genuine vanishing lines.
    fn extent(&self, coord: impl Fn(&Generator) -> i64, positive: bool) -> Option<i64> {
        let mut total = 0i64;
        for g in &self.generators {
            let c = coord(g);
            if g.periodic && c != 0 {
                return None;
            }
            if (positive && c <= 0) || (!positive && c >= 0) {
                continue;
            }
            let e_max = match g.kind {
                GenKind::Exterior => 1,
                GenKind::Polynomial => match g.truncation {
                    Some(n) => n - 1,
                    None => return None,
                },
            };
            total += c * e_max;
        }
        Some(total)
    }

    /// Guard-banded window for reading off stable dimensions: pull each edge
    /// in by `g` pages, but only where the window actually truncates content.
    /// Edges beyond which the page is identically zero stay put.
    pub fn verification_window(&self, g: i64) -> PageWindow {
        let w = &self.window;
        let soft = |ext: Option<i64>, edge: i64, max_side: bool| match ext {
            None => true,
            Some(e) => {
                if max_side {
                    e > edge
                } else {
                    e < edge
                }
            }
        };
        PageWindow {
            s_min: if soft(self.extent(|g| g.s, false), w.s_min, false) {
                w.s_min + g
            } else {
                w.s_min
            },
            s_max: if soft(self.extent(|g| g.s, true), w.s_max, true) {
                w.s_max - g
            } else {
                w.s_max
            },
            t_min: if soft(self.extent(|g| g.t, false), w.t_min, false) {
                w.t_min + g
            } else {
                w.t_min
            },
            t_max: if soft(self.extent(|g| g.t, true), w.t_max, true) {
                w.t_max - g
            } else {
                w.t_max
            },
            weight_min: w.weight_min,
            weight_max: w.weight_max,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for g in &self.generators {
            let exterior = g.parity() == 1;
            let matches = match g.kind {
                GenKind::Exterior => exterior,
                // signs are trivial mod 2, where odd polynomial classes
                // (squares of odd generators survive) are legitimate
                GenKind::Polynomial => !exterior || self.modulus == 2,
            };
            if !matches {
                return Err(Error::BadAssignment {
                    generator: g.name.clone(),
                    reason: "kind does not match (s+t)-parity".into(),
                });
            }
            if g.periodic && g.kind == GenKind::Exterior {
                return Err(Error::BadAssignment {
                    generator: g.name.clone(),
                    reason: "periodic generators must be polynomial".into(),
                });
            }
        }
        Ok(())
    }

    fn exponent_range(&self, g: &Generator) -> (i64, i64) {
        if g.kind == GenKind::Exterior {
            return (0, 1);
        }
        let w = &self.window;
        // Bound exponents via linear functionals f(s, t, weight).  A functional
        // is usable for `g` when it vanishes on every periodic generator (those
        // take exponents of either sign) and is nonnegative, or at worst
        // boundedly negative, on everything else; then f of any monomial in the
        // window pins down the exponent of `g` up to a finite slack.
        let mut bound = i64::MAX;
        for (a, b, c) in [(1, 0, 0), (0, 1, 0), (1, 1, 0), (1, -1, 0), (0, 0, 1)] {
            let f = |h: &Generator| a * h.s + b * h.t + c * h.weight;
            let fg = f(g);
            if fg == 0 {
                continue;
            }
            let mut slack = 0i64;
            let mut usable = true;
            for h in &self.generators {
                if h.name == g.name {
                    continue;
                }
                let fh = f(h);
                if h.periodic {
                    if fh != 0 {
                        usable = false;
                        break;
                    }
                } else if fh < 0 {
                    let emax = match h.kind {
                        GenKind::Exterior => 1,
                        GenKind::Polynomial => match h.truncation {
                            Some(tr) => tr - 1,
                            None => {
                                usable = false;
                                break;
                            }
                        },
                    };
                    slack += -fh * emax;
                }
            }
            if !usable {
                continue;
            }
            let pick = |coef: i64, lo: i64, hi: i64| if coef > 0 { coef * hi } else { coef * lo };
            let f_max = pick(a, w.s_min, w.s_max)
                + pick(b, w.t_min, w.t_max)
                + pick(c, w.weight_min, w.weight_max);
            let f_min = -(pick(-a, w.s_min, w.s_max)
                + pick(-b, w.t_min, w.t_max)
                + pick(-c, w.weight_min, w.weight_max));
            let dir = |fg: i64| {
                let num = if fg > 0 { f_max + slack } else { slack - f_min };
                (num / fg.abs()).max(0)
            };
            let this = if g.periodic {
                dir(fg).max(dir(-fg))
            } else {
                dir(fg)
            };
            bound = bound.min(this);
        }
        let mut hi = bound;
        if let Some(tr) = g.truncation {
            hi = hi.min(tr - 1);
        }
        assert!(hi < i64::MAX, "unbounded generator {}", g.name);
        if g.periodic {
            (-hi, hi)
        } else {
            (0, hi)
        }
    }

    pub fn monomial_label(&self, m: &Monomial) -> String {
        let parts: Vec<String> = self
            .generators
            .iter()
            .zip(m)
            .filter(|(_, &e)| e != 0)
            .map(|(g, &e)| {
                if e == 1 {
                    g.name.clone()
                } else {
                    format!("{}^{}", g.name, e)
                }
            })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("·")
        }
    }

    pub fn position(&self, m: &Monomial) -> Cell {
        let mut s = 0;
        let mut t = 0;
        let mut w = 0;
        for (g, &e) in self.generators.iter().zip(m) {
            s += e * g.s;
            t += e * g.t;
            w += e * g.weight;
        }
        (s, t, w)
    }

    /// Product of two canonical monomials with the Koszul reordering sign;
    /// `None` when an exterior square or a truncation relation kills it.
    pub fn mul_monomials(&self, a: &Monomial, b: &Monomial) -> Option<(Monomial, i64)> {
        let mut sign = 1i64;
        for (i, g) in self.generators.iter().enumerate() {
            if g.parity() == 1 && b[i].rem_euclid(2) == 1 {
                let crossings: i64 = self.generators[i + 1..]
                    .iter()
                    .zip(&a[i + 1..])
                    .filter(|(h, _)| h.parity() == 1)
                    .map(|(_, &e)| e)
                    .sum();
                if crossings.rem_euclid(2) == 1 {
                    sign = -sign;
                }
            }
        }
        let mut out = Vec::with_capacity(a.len());
        for (i, g) in self.generators.iter().enumerate() {
            let e = a[i] + b[i];
            if g.kind == GenKind::Exterior && !(0..=1).contains(&e) {
                return None;
            }
            if let Some(tr) = g.truncation {
                if e >= tr {
                    return None;
                }
            }
            if e < 0 && !g.periodic {
                return None;
            }
            out.push(e);
        }
        Some((out, sign))
    }

    /// Leibniz expansion of the assigned differentials on one monomial.
    pub fn differential_of(
        &self,
        assignment: &[Assignment],
        m: &Monomial,
    ) -> Vec<(Monomial, u64)> {
        let p = self.modulus;
        let mut out: BTreeMap<Monomial, u64> = BTreeMap::new();
        for a in assignment {
            let i = a.source;
            if m[i] == 0 {
                continue;
            }
            // prefix parity of g_0^{e_0} … g_(i-1)^{e_(i-1)}
            let pref: i64 = self.generators[..i]
                .iter()
                .zip(m)
                .filter(|(g, _)| g.parity() == 1)
                .map(|(_, &e)| e)
                .sum();
            let mut coef = (m[i].rem_euclid(p as i64) as u64) * a.scalar % p;
            if pref.rem_euclid(2) == 1 {
                coef = (p - coef) % p;
            }
            if coef == 0 {
                continue;
            }
            // prefix (including g_i^(e_i - 1)) · d(g_i) · suffix
            let mut pre = vec![0i64; m.len()];
            pre[..=i].copy_from_slice(&m[..=i]);
            pre[i] -= 1;
            let mut suf = vec![0i64; m.len()];
            suf[i + 1..].copy_from_slice(&m[i + 1..]);
            let Some((pm, s1)) = self.mul_monomials(&pre, &a.target) else {
                continue;
            };
            let Some((full, s2)) = self.mul_monomials(&pm, &suf) else {
                continue;
            };
            let mut c = coef;
            if (s1 * s2) < 0 {
                c = (p - c) % p;
            }
            let e = out.entry(full).or_insert(0);
            *e = (*e + c) % p;
        }
        out.into_iter().filter(|&(_, c)| c != 0).collect()
    }

    pub fn expand(&self) -> Result<ExpandedPage> {
        self.validate()?;
        let ranges: Vec<(i64, i64)> = self
            .generators
            .iter()
            .map(|g| self.exponent_range(g))
            .collect();
        let mut cells: BTreeMap<Cell, Vec<Monomial>> = BTreeMap::new();
        let mut stack: Vec<Monomial> = vec![Vec::new()];
        for &(lo, hi) in &ranges {
            let mut next = Vec::new();
            for m in stack {
                for e in lo..=hi {
                    let mut m2 = m.clone();
                    m2.push(e);
                    next.push(m2);
                }
            }
            stack = next;
        }
        for m in stack {
            let (s, t, w) = self.position(&m);
            if self.window.contains(s, t, w) {
                cells.entry((s, t, w)).or_default().push(m);
            }
        }
        for v in cells.values_mut() {
            v.sort();
        }
        Ok(ExpandedPage {
            pres: self.clone(),
            cells,
        })
    }
}

/// Monomial bases of every window cell of the page.
#[derive(Debug, Clone)]
pub struct ExpandedPage {
    pub pres: PagePresentation,
    pub cells: BTreeMap<Cell, Vec<Monomial>>,
}

impl ExpandedPage {
    pub fn cell_dim(&self, c: Cell) -> usize {
        self.cells.get(&c).map_or(0, |v| v.len())
    }

    fn index_in_cell(&self, c: Cell, m: &Monomial) -> Option<usize> {
        self.cells.get(&c)?.binary_search(m).ok()
    }

    /// Ambient matrix of the Leibniz-extended differential out of one cell on
    /// page `r` (target cell `(s + r, t + 1 − r, w)`); terms leaving the
    /// window are dropped.
    pub fn ambient_differential(&self, assignment: &[Assignment], r: i64, c: Cell) -> FpMatrix {
        let (s, t, w) = c;
        let target = (s + r, t + 1 - r, w);
        let src = self.cells.get(&c).cloned().unwrap_or_default();
        let mut m = FpMatrix::zeros(self.cell_dim(target), src.len(), self.pres.modulus);
        for (j, mono) in src.iter().enumerate() {
            for (tm, coef) in self.pres.differential_of(assignment, mono) {
                if let Some(i) = self.index_in_cell(target, &tm) {
                    m.add_to(i, j, coef);
                }
            }
        }
        m
    }

    /// Validate generator-level assignments for page `r`: bidegree `(r, 1−r)`,
    /// weight 0, target inside the window.
    pub fn check_assignment(&self, assignment: &[Assignment], r: i64) -> Result<()> {
        for a in assignment {
            let g = &self.pres.generators[a.source];
            let (s, t, w) = self.pres.position(&a.target);
            if (s, t) != (g.s + r, g.t + 1 - r) {
                return Err(Error::BadAssignment {
                    generator: g.name.clone(),
                    reason: format!("target bidegree ({s},{t}) is not d_{r}-compatible"),
                });
            }
            if w != g.weight {
                return Err(Error::BadAssignment {
                    generator: g.name.clone(),
                    reason: "differential does not preserve the weight".into(),
                });
            }
            if !self.pres.window.contains(s, t, w) {
                return Err(Error::BadAssignment {
                    generator: g.name.clone(),
                    reason: "target outside the window".into(),
                });
            }
            if a.scalar % self.pres.modulus == 0 {
                return Err(Error::BadAssignment {
                    generator: g.name.clone(),
                    reason: "zero scalar; omit the assignment instead".into(),
                });
            }
        }
        Ok(())
    }
}

/// A page in a running spectral sequence: per cell, the ambient monomial
/// space together with cycles-so-far `Z` and boundaries-so-far `B ⊆ Z`; the
/// page table is `Z/B`.
#[derive(Debug, Clone)]
pub struct PageState {
    pub expanded: ExpandedPage,
    pub r: i64,
    z: BTreeMap<Cell, FpMatrix>,
    b: BTreeMap<Cell, FpMatrix>,
}

impl PageState {
    pub fn new(expanded: ExpandedPage) -> PageState {
        let p = expanded.pres.modulus;
        let r = expanded.pres.start_page;
        let mut z = BTreeMap::new();
        let mut b = BTreeMap::new();
        for (&c, monos) in &expanded.cells {
            z.insert(c, FpMatrix::identity(monos.len(), p));
            b.insert(c, FpMatrix::zeros(monos.len(), 0, p));
        }
        PageState { expanded, r, z, b }
    }

    pub fn dims(&self) -> BTreeMap<Cell, usize> {
        self.z
            .iter()
            .map(|(&c, zc)| (c, zc.rank() - self.b[&c].rank()))
            .filter(|&(_, d)| d > 0)
            .collect()
    }

    pub fn dim_in_total_degree(&self, n: i64, window: &PageWindow) -> usize {
        self.dims()
            .iter()
            .filter(|(&(s, t, w), _)| s + t == n && window.contains(s, t, w))
            .map(|(_, &d)| d)
            .sum()
    }

    /// Is the class of an ambient vector still alive (a cycle and not a
    /// boundary) in this page's cell?
    pub fn alive(&self, c: Cell, v: &[u64]) -> bool {
        let p = self.expanded.pres.modulus;
        let m = FpMatrix::from_cols(&[v.to_vec()], v.len(), p);
        FpMatrix::contains_cols(&self.z[&c], &m) && !FpMatrix::contains_cols(&self.b[&c], &m)
    }

    pub fn generator_alive(&self, idx: usize) -> bool {
        let g = &self.expanded.pres.generators[idx];
        let c = (g.s, g.t, g.weight);
        let mono: Monomial = (0..self.expanded.pres.generators.len())
            .map(|i| i64::from(i == idx))
            .collect();
        match self.expanded.index_in_cell(c, &mono) {
            None => false,
            Some(i) => {
                let mut v = vec![0u64; self.expanded.cell_dim(c)];
                v[i] = 1;
                self.alive(c, &v)
            }
        }
    }

    pub fn monomial_alive(&self, m: &Monomial) -> bool {
        let c = self.expanded.pres.position(m);
        match self.expanded.index_in_cell(c, m) {
            None => false,
            Some(i) => {
                let mut v = vec![0u64; self.expanded.cell_dim(c)];
                v[i] = 1;
                self.alive(c, &v)
            }
        }
    }

    /// Apply the page-`r` differential given by `assignment` and pass to the
    /// next page. Checks `d_r ∘ d_r = 0` and that the Leibniz extension is
    /// compatible with the cycle/boundary filtration built so far.
    pub fn turn(&self, assignment: &[Assignment]) -> Result<PageState> {
        let exp = &self.expanded;
        let p = exp.pres.modulus;
        let r = self.r;
        exp.check_assignment(assignment, r)?;
        let off = |c: Cell| (c.0 + r, c.1 + 1 - r, c.2);
        // ambient d_r per cell, and d² = 0 with a witness monomial
        let mut d: BTreeMap<Cell, FpMatrix> = BTreeMap::new();
        for &c in exp.cells.keys() {
            d.insert(c, exp.ambient_differential(assignment, r, c));
        }
        for (&c, dc) in &d {
            if let Some(dn) = d.get(&off(c)) {
                let sq = dn.mul(dc);
                if !sq.is_zero() {
                    let col = (0..sq.cols())
                        .find(|&j| !sq.column(j).iter().all(|&x| x == 0))
                        .unwrap();
                    return Err(Error::NotAComplex {
                        degree: c.0 + c.1,
                        witness: exp.pres.monomial_label(&exp.cells[&c][col]),
                    });
                }
            }
        }
        let mut z2 = BTreeMap::new();
        let mut b2: BTreeMap<Cell, FpMatrix> = BTreeMap::new();
        for (&c, zc) in &self.z {
            let tc = off(c);
            let dz = d[&c].mul(zc);
            if let Some(zt) = self.z.get(&tc) {
                if !FpMatrix::contains_cols(zt, &dz) {
                    return Err(Error::BadAssignment {
                        generator: format!("cell ({},{},{})", c.0, c.1, c.2),
                        reason: "differential leaves the cycle filtration".into(),
                    });
                }
                let db = d[&c].mul(&self.b[&c]);
                if !FpMatrix::contains_cols(&self.b[&tc], &db) {
                    return Err(Error::BadAssignment {
                        generator: format!("cell ({},{},{})", c.0, c.1, c.2),
                        reason: "differential does not kill boundaries".into(),
                    });
                }
            } else if !dz.is_zero() {
                // target outside the window: tolerated, the guard band keeps
                // such cells out of any verified statement
            }
            // new boundaries at the target cell
            if self.z.contains_key(&tc) && !dz.is_zero() {
                let entry = b2.entry(tc).or_insert_with(|| self.b[&tc].clone());
                *entry = entry.hstack(&dz);
            }
            // new cycles here: z·x with d(z·x) ∈ span(boundaries at target)
            let bt = match self.b.get(&tc) {
                Some(m) => m.clone(),
                None => FpMatrix::zeros(dz.rows(), 0, p),
            };
            let ker = dz.hstack(&bt).kernel_basis();
            let mut coeff = FpMatrix::zeros(zc.cols(), ker.cols(), p);
            for j in 0..ker.cols() {
                for i in 0..zc.cols() {
                    coeff.set(i, j, ker.get(i, j));
                }
            }
            z2.insert(c, zc.mul(&coeff));
        }
        for (&c, bc) in &self.b {
            b2.entry(c).or_insert_with(|| bc.clone());
        }
        Ok(PageState {
            expanded: self.expanded.clone(),
            r: r + 1,
            z: z2,
            b: b2,
        })
    }
}

/// All generator/monomial pairs admissible as a `d_r` by bidegree and
/// weight, on the current page: sources must be live non-permanent
/// generators, targets live monomials that are not bare permanent generators.
pub fn admissible_differentials(state: &PageState, r: i64) -> Vec<(usize, Monomial)> {
    let pres = &state.expanded.pres;
    let mut out = Vec::new();
    for (i, g) in pres.generators.iter().enumerate() {
        if g.permanent || !state.generator_alive(i) {
            continue;
        }
        let target = (g.s + r, g.t + 1 - r, g.weight);
        let Some(monos) = state.expanded.cells.get(&target) else {
            continue;
        };
        for m in monos {
            // a bare permanent generator cannot be hit
            let bare_permanent = m.iter().sum::<i64>() == 1
                && m.iter()
                    .zip(&pres.generators)
                    .any(|(&e, h)| e == 1 && h.permanent);
            if bare_permanent || !state.monomial_alive(m) {
                continue;
            }
            out.push((i, m.clone()));
        }
    }
    out.sort_by(|a, b| {
        (&pres.generators[a.0].name, &a.1).cmp(&(&pres.generators[b.0].name, &b.1))
    });
    out
}

/// What the spectral sequence must converge to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AbutmentSpec {
    /// exact dimension per total degree; unlisted degrees mean 0
    ExplicitDims { per_degree: BTreeMap<i64, usize> },
    /// every surviving class must have weight divisible by `modulus`
    WeightSupport { modulus: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternStep {
    pub r: i64,
    pub generator: String,
    pub target: String,
}

pub type Pattern = Vec<PatternStep>;

#[derive(Debug, Clone)]
pub struct SearchReport {
    pub patterns: Vec<Pattern>,
    pub unique: bool,
    pub branches_explored: u64,
    pub branches_pruned: u64,
    /// final per-total-degree dims of the first accepted pattern, inside the
    /// verification window
    pub final_dims: BTreeMap<i64, usize>,
}

struct SearchCtx<'a> {
    abutment: &'a AbutmentSpec,
    verification: PageWindow,
    r_max: i64,
    cand_budget: usize,
    branch_budget: u64,
    branches: u64,
    pruned: u64,
    patterns: Vec<Pattern>,
    final_dims: BTreeMap<i64, usize>,
    closest_miss: Option<(usize, Pattern)>,
}

/// Exhaustive search over admissible generator-level differential patterns on
/// pages `start_page ≤ r ≤ r_max`, keeping exactly those whose stable page
/// matches the abutment in the guard-banded verification window.
pub fn forced_search(
    pres: &PagePresentation,
    abutment: &AbutmentSpec,
    r_max: i64,
    cand_budget: usize,
    branch_budget: u64,
) -> Result<SearchReport> {
    let expanded = pres.expand()?;
    let verification = pres.verification_window(r_max);
    if verification.s_min > verification.s_max || verification.t_min > verification.t_max {
        return Err(Error::Precondition(
            "window too small for the guard band".into(),
        ));
    }
    let state = PageState::new(expanded);
    let mut ctx = SearchCtx {
        abutment,
        verification,
        r_max,
        cand_budget,
        branch_budget,
        branches: 0,
        pruned: 0,
        patterns: Vec::new(),
        final_dims: BTreeMap::new(),
        closest_miss: None,
    };
    search(&state, Vec::new(), &mut ctx)?;
    if ctx.patterns.is_empty() {
        let miss = match &ctx.closest_miss {
            Some((bad, pat)) => format!(
                "closest miss ({bad} mismatched degrees): {}",
                describe_pattern(pat)
            ),
            None => "no candidate pattern reached the final page".into(),
        };
        return Err(Error::AbutmentUnreachable(miss));
    }
    Ok(SearchReport {
        unique: ctx.patterns.len() == 1,
        patterns: ctx.patterns,
        branches_explored: ctx.branches,
        branches_pruned: ctx.pruned,
        final_dims: ctx.final_dims,
    })
}

fn describe_pattern(p: &Pattern) -> String {
    if p.is_empty() {
        return "no differentials".into();
    }
    p.iter()
        .map(|s| format!("d_{}({}) = {}", s.r, s.generator, s.target))
        .collect::<Vec<_>>()
        .join(", ")
}

fn verified_degree_dims(state: &PageState, window: &PageWindow) -> BTreeMap<i64, usize> {
    let mut out = BTreeMap::new();
    for ((s, t, w), d) in state.dims() {
        if window.contains(s, t, w) {
            *out.entry(s + t).or_insert(0) += d;
        }
    }
    out
}

fn abutment_mismatches(
    state: &PageState,
    abutment: &AbutmentSpec,
    window: &PageWindow,
) -> usize {
    match abutment {
        AbutmentSpec::ExplicitDims { per_degree } => {
            // only the listed degrees are compared: away from them the window
            // edge truncates the page and the totals are not meaningful
            let got = verified_degree_dims(state, window);
            per_degree
                .iter()
                .filter(|(n, want)| got.get(n).copied().unwrap_or(0) != **want)
                .count()
        }
        AbutmentSpec::WeightSupport { modulus } => state
            .dims()
            .keys()
            .filter(|&&(s, t, w)| window.contains(s, t, w) && w.rem_euclid(*modulus) != 0)
            .count(),
    }
}

fn prunable(state: &PageState, abutment: &AbutmentSpec, window: &PageWindow) -> bool {
    // page dims only ever shrink, so dropping below a required dimension is
    // final (only meaningful for explicit abutments)
    if let AbutmentSpec::ExplicitDims { per_degree } = abutment {
        let got = verified_degree_dims(state, window);
        per_degree
            .iter()
            .any(|(n, &need)| got.get(n).copied().unwrap_or(0) < need)
    } else {
        false
    }
}

fn search(state: &PageState, path: Pattern, ctx: &mut SearchCtx) -> Result<()> {
    if state.r > ctx.r_max {
        let miss = abutment_mismatches(state, ctx.abutment, &ctx.verification);
        if miss == 0 {
            if ctx.patterns.is_empty() {
                ctx.final_dims = verified_degree_dims(state, &ctx.verification);
            }
            ctx.patterns.push(path);
        } else if ctx.closest_miss.as_ref().map_or(true, |(b, _)| miss < *b) {
            ctx.closest_miss = Some((miss, path));
        }
        return Ok(());
    }
    let cands = admissible_differentials(state, state.r);
    if cands.len() > ctx.cand_budget {
        return Err(Error::ResourceExceeded(format!(
            "{} admissible candidates on page {} (budget {})",
            cands.len(),
            state.r,
            ctx.cand_budget
        )));
    }
    // group candidates per source generator; each source independently picks
    // zero or one target
    let mut per_gen: BTreeMap<usize, Vec<Monomial>> = BTreeMap::new();
    for (g, m) in cands {
        per_gen.entry(g).or_default().push(m);
    }
    let gens: Vec<usize> = per_gen.keys().copied().collect();
    let mut choice = vec![0usize; gens.len()]; // 0 = no differential
    loop {
        ctx.branches += 1;
        if ctx.branches > ctx.branch_budget {
            return Err(Error::ResourceExceeded(format!(
                "search branch budget {} exhausted",
                ctx.branch_budget
            )));
        }
        let assignment: Vec<Assignment> = gens
            .iter()
            .zip(&choice)
            .filter(|(_, &c)| c > 0)
            .map(|(&g, &c)| Assignment {
                source: g,
                target: per_gen[&g][c - 1].clone(),
                scalar: 1,
            })
            .collect();
        let mut path2 = path.clone();
        for a in &assignment {
            path2.push(PatternStep {
                r: state.r,
                generator: state.expanded.pres.generators[a.source].name.clone(),
                target: state.expanded.pres.monomial_label(&a.target),
            });
        }
        match state.turn(&assignment) {
            Ok(next) => {
                if prunable(&next, ctx.abutment, &ctx.verification) {
                    ctx.pruned += 1;
                } else {
                    search(&next, path2, ctx)?;
                }
            }
            Err(Error::NotAComplex { .. }) | Err(Error::BadAssignment { .. }) => {
                ctx.pruned += 1; // inconsistent multiplicative data
            }
            Err(e) => return Err(e),
        }
        // odometer over per-generator choices
        let mut k = gens.len();
        loop {
            if k == 0 {
                return Ok(());
            }
            k -= 1;
            choice[k] += 1;
            if choice[k] <= per_gen[&gens[k]].len() {
                break;
            }
            choice[k] = 0;
        }
        if choice.iter().all(|&c| c == 0) {
            return Ok(());
        }
    }
}

/// Run a fixed, user-declared differential schedule (page → assignments) and
/// return the stable page.
pub fn run_schedule(
    pres: &PagePresentation,
    schedule: &BTreeMap<i64, Vec<Assignment>>,
    r_max: i64,
) -> Result<PageState> {
    let mut state = PageState::new(pres.expand()?);
    while state.r <= r_max {
        let empty = Vec::new();
        let a = schedule.get(&state.r).unwrap_or(&empty);
        state = state.turn(a)?;
    }
    Ok(state)
}

fn plain_gen(name: &str, s: i64, t: i64, weight: i64, kind: GenKind) -> Generator {
    Generator {
        name: name.into(),
        s,
        t,
        weight,
        kind,
        truncation: None,
        periodic: false,
        permanent: false,
    }
}

/// The Hochschild-filtration page of the multiplicative-type group:
/// E(d)⊗P(c) with d at (0,−1), c at (1,−1), both of weight 0.
pub fn hkr_page_mu(p: u64, s_max: i64) -> PagePresentation {
    PagePresentation {
        modulus: p,
        start_page: 2,
        generators: vec![
            plain_gen("d", 0, -1, 0, GenKind::Exterior),
            plain_gen("c", 1, -1, 0, GenKind::Polynomial),
        ],
        window: PageWindow {
            s_min: 0,
            s_max,
            t_min: -s_max - 1,
            t_max: 0,
            weight_min: -100,
            weight_max: 100,
        },
    }
}

/// The Hochschild-filtration page of the additive-type group: the fiber
/// classes E(s)⊗P(u) against the cohomology of the base, E(a)⊗P(b) for odd
/// p and P(a)⊗P(b) at p = 2, marked permanent.
pub fn hkr_page_alpha(p: u64, s_max: i64) -> PagePresentation {
    let a_kind = if p == 2 {
        GenKind::Polynomial
    } else {
        GenKind::Exterior
    };
    let mut a = plain_gen("a", 1, 0, 1, a_kind);
    a.permanent = true;
    let mut b = plain_gen("b", 2, 0, p as i64, GenKind::Polynomial);
    b.permanent = true;
    PagePresentation {
        modulus: p,
        start_page: 2,
        generators: vec![
            plain_gen("u", 1, -1, 1, GenKind::Polynomial),
            plain_gen("s", 0, -1, p as i64, GenKind::Exterior),
            a,
            b,
        ],
        window: PageWindow {
            s_min: 0,
            s_max,
            t_min: -s_max - 1,
            t_max: 0,
            weight_min: 0,
            weight_max: 2 * p as i64 * s_max,
        },
    }
}
