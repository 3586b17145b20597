//! Trigraded spaces, cochain complexes, bicomplexes and the Künneth product.
//!
//! Infinite objects are only ever materialized inside a [`Window`], and every
//! cohomology result distinguishes "dimension 0" from "indeterminate at this
//! window" — a truncation boundary never silently reports zero.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fp::FpMatrix;

/// (cohomological degree, wedge/filtration index, G_m-weight)
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
pub struct GradeIndex {
    pub deg: i64,
    pub wedge: i64,
    pub weight: i64,
}

impl GradeIndex {
    pub fn new(deg: i64, wedge: i64, weight: i64) -> Self {
        GradeIndex { deg, wedge, weight }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grade {
    pub dim: usize,
    pub labels: Vec<String>,
}

/// Vector space graded by [`GradeIndex`], with named basis lines.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedSpace {
    pub grades: BTreeMap<GradeIndex, Grade>,
}

impl GradedSpace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, idx: GradeIndex, label: impl Into<String>) {
        let g = self.grades.entry(idx).or_default();
        g.dim += 1;
        g.labels.push(label.into());
    }

    pub fn add_dim(&mut self, idx: GradeIndex, dim: usize) {
        if dim > 0 {
            self.grades.entry(idx).or_default().dim += dim;
        }
    }

    pub fn dim_at(&self, idx: GradeIndex) -> usize {
        self.grades.get(&idx).map_or(0, |g| g.dim)
    }

    pub fn dim_in_degree(&self, deg: i64) -> usize {
        self.grades
            .iter()
            .filter(|(i, _)| i.deg == deg)
            .map(|(_, g)| g.dim)
            .sum()
    }

    /// Total dimension along the antidiagonal `deg + wedge = n`.
    pub fn dim_in_total_degree(&self, n: i64) -> usize {
        self.grades
            .iter()
            .filter(|(i, _)| i.deg + i.wedge == n)
            .map(|(_, g)| g.dim)
            .sum()
    }

    pub fn total_dim(&self) -> usize {
        self.grades.values().map(|g| g.dim).sum()
    }

    pub fn weights_in_degree(&self, deg: i64) -> Vec<(i64, usize)> {
        self.grades
            .iter()
            .filter(|(i, g)| i.deg == deg && g.dim > 0)
            .map(|(i, g)| (i.weight, g.dim))
            .collect()
    }

    /// The unit object: one line in grade (0,0,0).
    pub fn unit() -> Self {
        let mut s = Self::new();
        s.add(GradeIndex::new(0, 0, 0), "1");
        s
    }
}

/// Finite truncation window for unbounded graded objects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub deg_min: i64,
    pub deg_max: i64,
    pub weight_max: i64,
}

impl Window {
    pub fn new(deg_min: i64, deg_max: i64, weight_max: i64) -> Self {
        assert!(deg_min <= deg_max);
        Window {
            deg_min,
            deg_max,
            weight_max,
        }
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> {
        self.deg_min..=self.deg_max
    }
}

/// A basis vector of one term of a complex, carrying its weight.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisVector {
    pub label: String,
    pub weight: i64,
}

impl BasisVector {
    pub fn new(label: impl Into<String>, weight: i64) -> Self {
        BasisVector {
            label: label.into(),
            weight,
        }
    }
}

/// Cochain complex presented by `F_p` matrices within a degree range.
///
/// `d(n)` maps the term in degree `n` to the term in degree `n+1`; the matrix
/// has `dim(n+1)` rows and `dim(n)` columns. When `complete` is set, terms
/// outside the stored range are genuinely zero; otherwise they are unknown
/// and boundary degrees report as indeterminate.
#[derive(Debug, Clone)]
pub struct CochainComplex {
    pub modulus: u64,
    pub terms: BTreeMap<i64, Vec<BasisVector>>,
    pub differentials: BTreeMap<i64, FpMatrix>,
    pub complete: bool,
}

impl CochainComplex {
    pub fn new(modulus: u64, complete: bool) -> Self {
        CochainComplex {
            modulus,
            terms: BTreeMap::new(),
            differentials: BTreeMap::new(),
            complete,
        }
    }

    pub fn dim(&self, n: i64) -> usize {
        self.terms.get(&n).map_or(0, |t| t.len())
    }

    pub fn set_term(&mut self, n: i64, basis: Vec<BasisVector>) {
        self.terms.insert(n, basis);
    }

    pub fn set_differential(&mut self, n: i64, m: FpMatrix) {
        assert_eq!(m.cols(), self.dim(n), "d({n}) source dimension");
        assert_eq!(m.rows(), self.dim(n + 1), "d({n}) target dimension");
        self.differentials.insert(n, m);
    }

    pub fn differential(&self, n: i64) -> FpMatrix {
        self.differentials
            .get(&n)
            .cloned()
            .unwrap_or_else(|| FpMatrix::zeros(self.dim(n + 1), self.dim(n), self.modulus))
    }

    pub fn degree_range(&self) -> Option<(i64, i64)> {
        let lo = self.terms.keys().next()?;
        let hi = self.terms.keys().next_back()?;
        Some((*lo, *hi))
    }

    /// Checks `d ∘ d = 0` for every stored degree.
    pub fn validate(&self) -> Result<()> {
        for (&n, _) in &self.terms {
            let dd = self.differential(n + 1).mul(&self.differential(n));
            if !dd.is_zero() {
                return Err(Error::NotAComplex {
                    degree: n,
                    witness: format!("d({})∘d({}) has rank {}", n + 1, n, dd.rank()),
                });
            }
        }
        Ok(())
    }

    /// Checks that every differential preserves the basis weights.
    pub fn validate_weights(&self) -> Result<()> {
        for (&n, d) in &self.differentials {
            let src = self.terms.get(&n).cloned().unwrap_or_default();
            let tgt = self.terms.get(&(n + 1)).cloned().unwrap_or_default();
            for i in 0..d.rows() {
                for j in 0..d.cols() {
                    if d.get(i, j) != 0 && src[j].weight != tgt[i].weight {
                        return Err(Error::DimensionMismatch(format!(
                            "d({n}) mixes weight {} into weight {}",
                            src[j].weight, tgt[i].weight
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    fn determinate(&self, n: i64) -> bool {
        if self.complete {
            return true;
        }
        match self.degree_range() {
            Some((lo, hi)) => lo < n && n < hi,
            None => true,
        }
    }

    /// Degreewise `ker/im`, weight-decomposed, with indeterminate markers at
    /// window edges the complex does not determine.
    pub fn cohomology(&self, w: Window) -> Result<Cohomology> {
        self.validate()?;
        self.validate_weights()?;
        let mut space = GradedSpace::new();
        let mut indeterminate = BTreeSet::new();
        for n in w.degrees() {
            if !self.determinate(n) {
                indeterminate.insert(n);
                continue;
            }
            let basis = self.terms.get(&n).cloned().unwrap_or_default();
            let weights: BTreeSet<i64> = basis.iter().map(|b| b.weight).collect();
            for weight in weights {
                let (dim, reps) = self.cohomology_block(n, weight);
                for r in reps {
                    space.add(GradeIndex::new(n, 0, weight), r);
                }
                debug_assert_eq!(dim, space.dim_at(GradeIndex::new(n, 0, weight)));
            }
        }
        Ok(Cohomology {
            space,
            indeterminate,
        })
    }

    /// ker/im in degree `n` restricted to one weight; returns (dim, labels).
    fn cohomology_block(&self, n: i64, weight: i64) -> (usize, Vec<String>) {
        let basis = self.terms.get(&n).cloned().unwrap_or_default();
        let cols: Vec<usize> = (0..basis.len())
            .filter(|&j| basis[j].weight == weight)
            .collect();
        if cols.is_empty() {
            return (0, Vec::new());
        }
        let d_out = self.differential(n);
        let d_in = self.differential(n - 1);
        let sub = select_columns(&d_out, &cols);
        let ker = sub.kernel_basis(); // coords in `cols`
        // embed kernel back into the full term
        let mut ker_full = FpMatrix::zeros(basis.len(), ker.cols(), self.modulus);
        for (ci, &c) in cols.iter().enumerate() {
            for k in 0..ker.cols() {
                ker_full.set(c, k, ker.get(ci, k));
            }
        }
        let img = d_in; // columns span the image
        let dim = FpMatrix::subquotient_dim(&ker_full, &img);
        // deterministic representatives: greedily take kernel columns that
        // enlarge the span over the image
        let mut reps = Vec::new();
        let mut span = img.clone();
        let mut span_rank = span.rank();
        for k in 0..ker_full.cols() {
            if reps.len() == dim {
                break;
            }
            let col = FpMatrix::from_cols(&[ker_full.column(k)], basis.len(), self.modulus);
            let cand = span.hstack(&col);
            let r = cand.rank();
            if r > span_rank {
                span = cand;
                span_rank = r;
                let lead = (0..basis.len())
                    .find(|&i| ker_full.get(i, k) != 0)
                    .map(|i| basis[i].label.clone())
                    .unwrap_or_else(|| format!("h{n}"));
                reps.push(format!("[{lead}]"));
            }
        }
        (dim, reps)
    }
}

fn select_columns(m: &FpMatrix, cols: &[usize]) -> FpMatrix {
    let mut out = FpMatrix::zeros(m.rows(), cols.len(), m.modulus());
    for (k, &c) in cols.iter().enumerate() {
        for i in 0..m.rows() {
            out.set(i, k, m.get(i, c));
        }
    }
    out
}

/// Cohomology with explicit indeterminacy at window edges.
#[derive(Debug, Clone)]
pub struct Cohomology {
    pub space: GradedSpace,
    pub indeterminate: BTreeSet<i64>,
}

impl Cohomology {
    /// Dimension in a degree, or `None` when the window did not determine it.
    pub fn dim(&self, deg: i64) -> Option<usize> {
        if self.indeterminate.contains(&deg) {
            None
        } else {
            Some(self.space.dim_in_degree(deg))
        }
    }
}

/// A degreewise map of complexes commuting with the differentials.
#[derive(Debug, Clone)]
pub struct ChainMap {
    pub source: CochainComplex,
    pub target: CochainComplex,
    pub maps: BTreeMap<i64, FpMatrix>,
}

impl ChainMap {
    pub fn map(&self, n: i64) -> FpMatrix {
        self.maps.get(&n).cloned().unwrap_or_else(|| {
            FpMatrix::zeros(self.target.dim(n), self.source.dim(n), self.source.modulus)
        })
    }

    pub fn validate(&self) -> Result<()> {
        let degrees: BTreeSet<i64> = self
            .source
            .terms
            .keys()
            .chain(self.target.terms.keys())
            .copied()
            .collect();
        for &n in &degrees {
            let lhs = self.target.differential(n).mul(&self.map(n));
            let rhs = self.map(n + 1).mul(&self.source.differential(n));
            if lhs != rhs {
                return Err(Error::NonCommutingSquare(n));
            }
        }
        Ok(())
    }
}

/// Mapping fiber of `f : S → T`: degree `n` term is `S^n ⊕ T^{n-1}` with
/// `d(s, t) = (d_S s, f(s) − d_T t)`.
pub fn mapping_fiber(f: &ChainMap) -> Result<CochainComplex> {
    f.validate()?;
    let p = f.source.modulus;
    let mut fib = CochainComplex::new(p, f.source.complete && f.target.complete);
    let degrees: BTreeSet<i64> = f
        .source
        .terms
        .keys()
        .copied()
        .chain(f.target.terms.keys().map(|&n| n + 1))
        .collect();
    for &n in &degrees {
        let mut basis = f.source.terms.get(&n).cloned().unwrap_or_default();
        for b in f.target.terms.get(&(n - 1)).cloned().unwrap_or_default() {
            basis.push(BasisVector::new(format!("{}[1]", b.label), b.weight));
        }
        fib.set_term(n, basis);
    }
    for &n in &degrees {
        let s_n = f.source.dim(n);
        let t_nm1 = f.target.dim(n - 1);
        let rows = fib.dim(n + 1);
        let cols = fib.dim(n);
        if rows == 0 || cols == 0 {
            continue;
        }
        let s_n1 = f.source.dim(n + 1);
        let mut d = FpMatrix::zeros(rows, cols, p);
        let ds = f.source.differential(n);
        for i in 0..s_n1 {
            for j in 0..s_n {
                d.set(i, j, ds.get(i, j));
            }
        }
        let fm = f.map(n);
        for i in 0..f.target.dim(n) {
            for j in 0..s_n {
                d.set(s_n1 + i, j, fm.get(i, j));
            }
        }
        let dt = f.target.differential(n - 1);
        for i in 0..f.target.dim(n) {
            for j in 0..t_nm1 {
                let v = dt.get(i, j);
                if v != 0 {
                    d.set(s_n1 + i, s_n + j, p - v);
                }
            }
        }
        fib.set_differential(n, d);
    }
    fib.validate()?;
    Ok(fib)
}

/// Künneth / tensor-product grading: dimensions convolve over
/// (deg, wedge, weight); labels are concatenated monomials.
pub fn kunneth(a: &GradedSpace, b: &GradedSpace, w: Window) -> GradedSpace {
    let mut out = GradedSpace::new();
    for (ia, ga) in &a.grades {
        for (ib, gb) in &b.grades {
            let idx = GradeIndex::new(ia.deg + ib.deg, ia.wedge + ib.wedge, ia.weight + ib.weight);
            if idx.deg < w.deg_min || idx.deg > w.deg_max || idx.weight.abs() > w.weight_max {
                continue;
            }
            for la in &ga.labels {
                for lb in &gb.labels {
                    let label = match (la.as_str(), lb.as_str()) {
                        ("1", _) => lb.clone(),
                        (_, "1") => la.clone(),
                        _ => format!("{la}·{lb}"),
                    };
                    out.add(idx, label);
                }
            }
            // dimension-only entries (no labels recorded)
            let extra = ga.dim.saturating_sub(ga.labels.len()) * gb.dim.saturating_sub(gb.labels.len())
                + ga.dim.saturating_sub(ga.labels.len()) * gb.labels.len()
                + ga.labels.len() * gb.dim.saturating_sub(gb.labels.len());
            out.add_dim(idx, extra);
        }
    }
    out
}

/// Double complex with anticommuting differentials, truncated to a finite
/// set of cells. `dh` has bidegree (1,0), `dv` has bidegree (0,1).
#[derive(Debug, Clone)]
pub struct Bicomplex {
    pub modulus: u64,
    pub cells: BTreeMap<(i64, i64), Vec<BasisVector>>,
    pub dh: BTreeMap<(i64, i64), FpMatrix>,
    pub dv: BTreeMap<(i64, i64), FpMatrix>,
    /// cells outside the stored set are genuinely zero
    pub complete: bool,
}

impl Bicomplex {
    pub fn new(modulus: u64, complete: bool) -> Self {
        Bicomplex {
            modulus,
            cells: BTreeMap::new(),
            dh: BTreeMap::new(),
            dv: BTreeMap::new(),
            complete,
        }
    }

    pub fn dim(&self, c: (i64, i64)) -> usize {
        self.cells.get(&c).map_or(0, |b| b.len())
    }

    pub fn dh_at(&self, c: (i64, i64)) -> FpMatrix {
        self.dh
            .get(&c)
            .cloned()
            .unwrap_or_else(|| FpMatrix::zeros(self.dim((c.0 + 1, c.1)), self.dim(c), self.modulus))
    }

    pub fn dv_at(&self, c: (i64, i64)) -> FpMatrix {
        self.dv
            .get(&c)
            .cloned()
            .unwrap_or_else(|| FpMatrix::zeros(self.dim((c.0, c.1 + 1)), self.dim(c), self.modulus))
    }

    pub fn validate(&self) -> Result<()> {
        for (&c, _) in &self.cells {
            let hh = self.dh_at((c.0 + 1, c.1)).mul(&self.dh_at(c));
            let vv = self.dv_at((c.0, c.1 + 1)).mul(&self.dv_at(c));
            let hv = self
                .dh_at((c.0, c.1 + 1))
                .mul(&self.dv_at(c))
                .add(&self.dv_at((c.0 + 1, c.1)).mul(&self.dh_at(c)));
            if !hh.is_zero() || !vv.is_zero() || !hv.is_zero() {
                return Err(Error::NotAComplex {
                    degree: c.0 + c.1,
                    witness: format!("bicomplex square at {c:?}"),
                });
            }
        }
        Ok(())
    }
}

/// Direct-sum totalization within a window; returns the total complex and the
/// set of degrees that touch the truncation boundary (not window-stable).
pub fn totalize_bicomplex(b: &Bicomplex, w: Window) -> Result<(CochainComplex, BTreeSet<i64>)> {
    b.validate()?;
    let p = b.modulus;
    let mut total = CochainComplex::new(p, b.complete);
    // cell offsets per total degree, in lexicographic cell order
    let mut layout: BTreeMap<i64, Vec<(i64, i64)>> = BTreeMap::new();
    for (&c, basis) in &b.cells {
        if basis.is_empty() {
            continue;
        }
        let n = c.0 + c.1;
        if n < w.deg_min - 1 || n > w.deg_max + 1 {
            continue;
        }
        layout.entry(n).or_default().push(c);
    }
    for (&n, cells) in &layout {
        let mut basis = Vec::new();
        for &c in cells {
            for bv in &b.cells[&c] {
                basis.push(BasisVector::new(
                    format!("{}@({},{})", bv.label, c.0, c.1),
                    bv.weight,
                ));
            }
        }
        total.set_term(n, basis);
    }
    let offset = |cells: &[(i64, i64)], target: (i64, i64)| -> Option<usize> {
        let mut off = 0;
        for &c in cells {
            if c == target {
                return Some(off);
            }
            off += b.dim(c);
        }
        None
    };
    let empty = Vec::new();
    for (&n, cells) in &layout {
        let tgt_cells = layout.get(&(n + 1)).unwrap_or(&empty);
        let rows = total.dim(n + 1);
        let cols = total.dim(n);
        if rows == 0 || cols == 0 {
            continue;
        }
        let mut d = FpMatrix::zeros(rows, cols, p);
        for &c in cells {
            let co = offset(cells, c).unwrap();
            for (mat, tc) in [(b.dh_at(c), (c.0 + 1, c.1)), (b.dv_at(c), (c.0, c.1 + 1))] {
                if let Some(to) = offset(tgt_cells, tc) {
                    for i in 0..mat.rows() {
                        for j in 0..mat.cols() {
                            let v = mat.get(i, j);
                            if v != 0 {
                                d.set(to + i, co + j, v);
                            }
                        }
                    }
                }
            }
        }
        total.set_differential(n, d);
    }
    total.validate()?;
    // degrees whose neighbours reach outside the window are unstable
    let mut unstable = BTreeSet::new();
    if !b.complete {
        for n in w.degrees() {
            if n == w.deg_min || n == w.deg_max {
                unstable.insert(n);
            }
        }
    }
    Ok((total, unstable))
}

/// Convenience: the complex `0 → k → 0` in one degree.
pub fn one_term(p: u64, deg: i64, label: &str, weight: i64) -> CochainComplex {
    let mut c = CochainComplex::new(p, true);
    c.set_term(deg, vec![BasisVector::new(label, weight)]);
    c
}

/// The two-term complex `k --×n--> k` in degrees `deg, deg+1`.
pub fn two_term_mult(p: u64, deg: i64, n: i64) -> CochainComplex {
    let mut c = CochainComplex::new(p, true);
    c.set_term(deg, vec![BasisVector::new("x", 0)]);
    c.set_term(deg + 1, vec![BasisVector::new("y", 0)]);
    c.set_differential(deg, FpMatrix::from_rows(&[vec![n]], p));
    c
}
