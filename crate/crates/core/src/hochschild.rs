//! Hochschild homology via the normalized bar complex, the small 2-periodic
//! complex for truncated polynomial algebras, the Connes operator, and
//! windowed negative-cyclic / periodic-cyclic homology of the (b,B)-complex.
//!
//! The bar complex is stored weight-blocked throughout: both `b` and `B`
//! preserve the weight, and the full chain spaces get large enough (degree-7
//! chains over `k[t]/(t^5)` have 81920 basis tensors) that materializing one
//! dense differential matrix is not an option.

use crate::algebra::PresentedAlgebra;
use crate::error::{Error, Result};
use crate::fp::{EchelonSpan, FpMatrix};
use crate::graded::{GradeIndex, GradedSpace, Window};
use std::collections::{BTreeMap, BTreeSet};

/// A basis tensor `a_(b0) ⊗ ē_(t[0]) ⊗ … ⊗ ē_(t[n-1])` of the normalized
/// chain group `C_n = A ⊗ Ī^⊗n`; slot indices are augmentation-ideal basis
/// indices (algebra basis index minus one).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct BarTensor {
    b0: usize,
    slots: Vec<usize>,
}

/// Normalized bar complex of an augmented algebra through a fixed top degree,
/// organized by weight.
pub struct BarComplex {
    pub algebra: PresentedAlgebra,
    pub top_degree: usize,
    /// per degree: weight ↦ ordered basis tensors of that weight
    blocks: Vec<BTreeMap<i64, Vec<BarTensor>>>,
    /// reduced basis elements as algebra elements
    reduced: Vec<Vec<u64>>,
}

impl BarComplex {
    /// Budget guard: `dim(Ī)^n` per degree must stay within `budget`.
    pub fn build(a: &PresentedAlgebra, top_degree: usize, budget: u64) -> Result<BarComplex> {
        let red = a.dim() - 1;
        let mut count = 1u64;
        for n in 0..=top_degree {
            if n > 0 {
                count = count.saturating_mul(red as u64);
            }
            if count.saturating_mul(a.dim() as u64) > budget {
                return Err(Error::ResourceExceeded(format!(
                    "bar complex degree {n} needs {} tensors",
                    count * a.dim() as u64
                )));
            }
        }
        a.eps(&a.unit())?;
        let p = a.modulus;
        let reduced: Vec<Vec<u64>> = (1..a.dim())
            .map(|i| {
                let mut v = vec![0u64; a.dim()];
                v[i] = 1;
                let e = a.eps(&v).unwrap();
                v[0] = (p - e % p) % p;
                v
            })
            .collect();
        let mut blocks = Vec::new();
        for n in 0..=top_degree {
            let mut by_weight: BTreeMap<i64, Vec<BarTensor>> = BTreeMap::new();
            if red > 0 || n == 0 {
                let mut slots = vec![0usize; n];
                loop {
                    for b0 in 0..a.dim() {
                        let w = a.weights[b0]
                            + slots.iter().map(|&i| a.weights[i + 1]).sum::<i64>();
                        by_weight.entry(w).or_default().push(BarTensor {
                            b0,
                            slots: slots.clone(),
                        });
                    }
                    // odometer over the slot indices
                    let mut k = n;
                    loop {
                        if k == 0 {
                            break;
                        }
                        k -= 1;
                        slots[k] += 1;
                        if slots[k] < red {
                            break;
                        }
                        slots[k] = 0;
                    }
                    if slots.iter().all(|&s| s == 0) {
                        break;
                    }
                }
            }
            for v in by_weight.values_mut() {
                v.sort(); // block order must support binary search
            }
            blocks.push(by_weight);
        }
        Ok(BarComplex {
            algebra: a.clone(),
            top_degree,
            blocks,
            reduced,
        })
    }

    pub fn weights_in_degree(&self, n: usize) -> Vec<i64> {
        self.blocks[n].keys().copied().collect()
    }

    pub fn block_dim(&self, n: usize, w: i64) -> usize {
        self.blocks[n].get(&w).map_or(0, |v| v.len())
    }

    pub fn label(&self, t: &BarTensor) -> String {
        let mut s = self.algebra.basis[t.b0].clone();
        for &i in &t.slots {
            s.push('|');
            s.push_str(&self.algebra.basis[i + 1]);
        }
        s
    }

    fn position(&self, n: usize, w: i64, t: &BarTensor) -> usize {
        let v = &self.blocks[n][&w];
        v.binary_search(t).expect("tensor not in its weight block")
    }

    /// Image of a basis tensor under `b`, as (target tensor, coefficient)
    /// pairs; `b = Σ (−1)^i d_i` with the outer faces multiplying into the
    /// coefficient slot and inner faces projecting to `Ī`.
    fn b_of(&self, t: &BarTensor) -> Vec<(BarTensor, u64)> {
        let a = &self.algebra;
        let p = a.modulus;
        let n = t.slots.len();
        if n == 0 {
            return Vec::new();
        }
        let mut out: BTreeMap<BarTensor, u64> = BTreeMap::new();
        let mut add = |tensor: BarTensor, c: u64| {
            if c % p != 0 {
                let e = out.entry(tensor).or_insert(0);
                *e = (*e + c) % p;
            }
        };
        let mut e_b0 = vec![0u64; a.dim()];
        e_b0[t.b0] = 1;
        // face 0: a0·ā1 into the coefficient slot
        let prod = a.multiply(&e_b0, &self.reduced[t.slots[0]]);
        for (c0, &coef) in prod.iter().enumerate() {
            add(
                BarTensor {
                    b0: c0,
                    slots: t.slots[1..].to_vec(),
                },
                coef,
            );
        }
        // inner faces: merge adjacent reduced slots, drop the unit part
        for j in 0..n.saturating_sub(1) {
            let prod = a.multiply(&self.reduced[t.slots[j]], &self.reduced[t.slots[j + 1]]);
            let sign = if (j + 1) % 2 == 0 { 1 } else { p - 1 };
            for (i, &coef) in prod.iter().enumerate().skip(1) {
                if coef == 0 {
                    continue;
                }
                let mut slots = Vec::with_capacity(n - 1);
                slots.extend_from_slice(&t.slots[..j]);
                slots.push(i - 1);
                slots.extend_from_slice(&t.slots[j + 2..]);
                add(BarTensor { b0: t.b0, slots }, sign * coef % p);
            }
        }
        // last face: ā_n · a0 into the coefficient slot
        let prod = a.multiply(&self.reduced[t.slots[n - 1]], &e_b0);
        let sign = if n % 2 == 0 { 1 } else { p - 1 };
        for (c0, &coef) in prod.iter().enumerate() {
            add(
                BarTensor {
                    b0: c0,
                    slots: t.slots[..n - 1].to_vec(),
                },
                sign * coef % p,
            );
        }
        out.into_iter().collect()
    }

    /// Image of a basis tensor under the Connes operator `B`: the signed sum
    /// of all cyclic rotations pushed into reduced slots under a fresh unit
    /// coefficient.
    fn big_b_of(&self, t: &BarTensor) -> Vec<(BarTensor, u64)> {
        let p = self.algebra.modulus;
        if t.b0 == 0 {
            return Vec::new(); // the unit dies in a reduced slot
        }
        let n = t.slots.len();
        let mut entries = Vec::with_capacity(n + 1);
        entries.push(t.b0 - 1);
        entries.extend_from_slice(&t.slots);
        let mut out: BTreeMap<BarTensor, u64> = BTreeMap::new();
        for i in 0..=n {
            let sign = if (n * i) % 2 == 0 { 1 } else { p - 1 };
            let mut slots = Vec::with_capacity(n + 1);
            for k in 0..=n {
                slots.push(entries[(i + k) % (n + 1)]);
            }
            let e = out.entry(BarTensor { b0: 0, slots }).or_insert(0);
            *e = (*e + sign) % p;
        }
        out.into_iter().filter(|&(_, c)| c != 0).collect()
    }

    /// The weight-`w` block of `b_n : C_n → C_(n-1)`.
    pub fn b_block(&self, n: usize, w: i64) -> FpMatrix {
        assert!(n >= 1 && n <= self.top_degree);
        let cols = self.blocks[n].get(&w).cloned().unwrap_or_default();
        let rows = self.block_dim(n - 1, w);
        let mut m = FpMatrix::zeros(rows, cols.len(), self.algebra.modulus);
        for (c, t) in cols.iter().enumerate() {
            for (target, coef) in self.b_of(t) {
                m.add_to(self.position(n - 1, w, &target), c, coef);
            }
        }
        m
    }

    /// The weight-`w` block of `B : C_n → C_(n+1)`.
    pub fn big_b_block(&self, n: usize, w: i64) -> FpMatrix {
        assert!(n + 1 <= self.top_degree);
        let cols = self.blocks[n].get(&w).cloned().unwrap_or_default();
        let rows = self.block_dim(n + 1, w);
        let mut m = FpMatrix::zeros(rows, cols.len(), self.algebra.modulus);
        for (c, t) in cols.iter().enumerate() {
            for (target, coef) in self.big_b_of(t) {
                m.add_to(self.position(n + 1, w, &target), c, coef);
            }
        }
        m
    }

    /// `b² = 0`, `B² = 0`, `bB + Bb = 0` on every stored weight block.
    pub fn verify_identities(&self) -> Result<()> {
        for n in 2..=self.top_degree {
            for &w in self.blocks[n].keys() {
                let sq = self.b_block(n - 1, w).mul(&self.b_block(n, w));
                if !sq.is_zero() {
                    return Err(Error::NotAComplex {
                        degree: n as i64,
                        witness: "b²".into(),
                    });
                }
            }
        }
        for n in 0..self.top_degree.saturating_sub(1) {
            for &w in self.blocks[n].keys() {
                let sq = self.big_b_block(n + 1, w).mul(&self.big_b_block(n, w));
                if !sq.is_zero() {
                    return Err(Error::NotAComplex {
                        degree: n as i64,
                        witness: "B²".into(),
                    });
                }
            }
        }
        for n in 1..self.top_degree {
            for &w in self.blocks[n].keys() {
                let bb = self.big_b_block(n - 1, w).mul(&self.b_block(n, w));
                let mut anti = self.b_block(n + 1, w).mul(&self.big_b_block(n, w));
                anti = anti.add(&bb);
                if !anti.is_zero() {
                    return Err(Error::NotAComplex {
                        degree: n as i64,
                        witness: "bB + Bb".into(),
                    });
                }
            }
        }
        Ok(())
    }
}

/// Hochschild homology dimensions, weight-decomposed, with representative
/// labels where computed. Degrees are homological (`deg = n ≥ 0`).
#[derive(Debug, Clone)]
pub struct HHResult {
    pub space: GradedSpace,
    pub indeterminate: BTreeSet<i64>,
}

impl HHResult {
    pub fn dim(&self, n: i64) -> Option<usize> {
        if self.indeterminate.contains(&n) {
            None
        } else {
            Some(self.space.dim_in_degree(n))
        }
    }
}

/// `HH_n(A)` for `0 ≤ n ≤ window.deg_max` via the normalized bar complex;
/// exact in every reported degree (one extra chain degree is built so the
/// top reported degree sees all its boundaries).
pub fn hochschild_bar(a: &PresentedAlgebra, window: &Window, budget: u64) -> Result<HHResult> {
    let top = (window.deg_max.max(0) as usize) + 1;
    let bar = BarComplex::build(a, top, budget)?;
    let mut space = GradedSpace::new();
    for n in 0..top {
        if (n as i64) < window.deg_min {
            continue;
        }
        for w in bar.weights_in_degree(n) {
            if w.abs() > window.weight_max {
                continue;
            }
            let boundary = bar.b_block(n + 1, w);
            let mut span = EchelonSpan::new(bar.block_dim(n, w), a.modulus);
            span.insert_columns(&boundary);
            let rank_in = span.rank();
            let kernel = if n == 0 {
                FpMatrix::identity(bar.block_dim(0, w), a.modulus)
            } else {
                bar.b_block(n, w).kernel_basis()
            };
            let tensors = &bar.blocks[n][&w];
            for j in 0..kernel.cols() {
                let col = kernel.column(j);
                if span.insert(&col) {
                    let lead = col.iter().position(|&c| c != 0).unwrap();
                    space.add(
                        GradeIndex::new(n as i64, 0, w),
                        bar.label(&tensors[lead]),
                    );
                }
            }
            debug_assert_eq!(
                span.rank() - rank_in,
                space.dim_at(GradeIndex::new(n as i64, 0, w))
            );
        }
    }
    Ok(HHResult {
        space,
        indeterminate: BTreeSet::new(),
    })
}

/// One weight block of the page-2 Tate differential: the map induced by the
/// Connes operator on homology classes in a fixed weight, from degree `n` to
/// degree `n+1`.
#[derive(Debug, Clone)]
pub struct TateBlock {
    pub source_dim: usize,
    pub target_dim: usize,
    /// `target_dim × source_dim`, columns indexed by the source classes
    pub matrix: FpMatrix,
}

fn homology_block(bar: &BarComplex, n: usize, w: i64) -> (FpMatrix, FpMatrix) {
    let p = bar.algebra.modulus;
    let dim = bar.block_dim(n, w);
    let boundaries = bar.b_block(n + 1, w);
    let mut span = EchelonSpan::new(dim, p);
    span.insert_columns(&boundaries);
    let kernel = if n == 0 {
        FpMatrix::identity(dim, p)
    } else {
        bar.b_block(n, w).kernel_basis()
    };
    let mut reps = Vec::new();
    for j in 0..kernel.cols() {
        let col = kernel.column(j);
        if span.insert(&col) {
            reps.push(col);
        }
    }
    (FpMatrix::from_cols(&reps, dim, p), boundaries)
}

/// d₂ of the Tate page of `HH(A)`: per (degree, weight), the Connes operator
/// applied to homology representatives, re-expressed in the degree-(n+1)
/// classes. `B` commutes with `b` up to sign, so each image is a cycle and
/// the induced map is well defined; both facts are asserted.
pub fn tate_d2(
    a: &PresentedAlgebra,
    window: &Window,
    budget: u64,
) -> Result<BTreeMap<(i64, i64), TateBlock>> {
    let top = (window.deg_max.max(0) as usize) + 2;
    let bar = BarComplex::build(a, top, budget)?;
    let mut out = BTreeMap::new();
    for n in 0..=(window.deg_max.max(0) as usize) {
        if (n as i64) < window.deg_min {
            continue;
        }
        for w in bar.weights_in_degree(n) {
            if w.abs() > window.weight_max {
                continue;
            }
            let (src_reps, _) = homology_block(&bar, n, w);
            if src_reps.cols() == 0 {
                continue;
            }
            let (tgt_reps, tgt_bnd) = homology_block(&bar, n + 1, w);
            let target_dim = tgt_reps.cols();
            let big_b = bar.big_b_block(n, w);
            let basis = tgt_reps.hstack(&tgt_bnd);
            let mut cols = Vec::new();
            for j in 0..src_reps.cols() {
                let image = big_b.mul_vec(&src_reps.column(j));
                let coeffs = basis
                    .solve(&image)
                    .expect("Connes operator image is not a cycle class");
                cols.push(coeffs[..target_dim].to_vec());
            }
            out.insert(
                (n as i64, w),
                TateBlock {
                    source_dim: src_reps.cols(),
                    target_dim,
                    matrix: FpMatrix::from_cols(&cols, target_dim, a.modulus),
                },
            );
        }
    }
    Ok(out)
}

/// Oracle: `HH(k[t]/(t^n))` via the classical 2-periodic complex
/// `A ←×0− A ←×f′− A ←×0− …` with `f = t^n`, carrying the same weights as
/// the bar model (`t` of weight `w`).
pub fn hochschild_small(
    p: u64,
    n: usize,
    weight_of_t: i64,
    window: &Window,
) -> Result<HHResult> {
    let a = crate::algebra::truncated_poly(p, n, weight_of_t);
    // f′ = n t^(n-1)
    let mut fprime = vec![0u64; n];
    fprime[n - 1] = n as u64 % p;
    let mult = a.regular_rep(&fprime);
    let kernel = mult.kernel_basis();
    let mut space = GradedSpace::new();
    for deg in window.deg_min.max(0)..=window.deg_max {
        let i = (deg / 2) as i64; // periodic index
        let gen_weight = if deg % 2 == 0 {
            i * n as i64 * weight_of_t
        } else {
            i * n as i64 * weight_of_t + weight_of_t
        };
        if deg == 0 {
            for k in 0..n {
                space.add(
                    GradeIndex::new(0, 0, a.weights[k]),
                    a.basis[k].clone(),
                );
            }
        } else if deg % 2 == 1 {
            // coker(×f′) on C_deg = A·gen
            let mut span = EchelonSpan::new(n, p);
            span.insert_columns(&mult);
            for k in 0..n {
                let mut ek = vec![0u64; n];
                ek[k] = 1;
                if span.insert(&ek) {
                    space.add(
                        GradeIndex::new(deg, 0, gen_weight + a.weights[k]),
                        format!("{}·e{}", a.basis[k], deg),
                    );
                }
            }
            debug_assert_eq!(span.rank(), n);
        } else {
            // ker(×f′) on C_deg
            for j in 0..kernel.cols() {
                let col = kernel.column(j);
                let lead = col.iter().position(|&c| c != 0).unwrap();
                if let Some(wv) = a.weight_of(&col) {
                    space.add(
                        GradeIndex::new(deg, 0, gen_weight + wv),
                        format!("{}·e{}", a.basis[lead], deg),
                    );
                } else {
                    return Err(Error::Precondition(
                        "inhomogeneous kernel vector in small complex".into(),
                    ));
                }
            }
        }
    }
    Ok(HHResult {
        space,
        indeterminate: BTreeSet::new(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CyclicVariant {
    NegativeCyclic,
    Periodic,
}

/// Windowed homology of the totalized (b,B)-complex, truncated u-adically to
/// `truncation` columns. The high-power-of-u part is a subcomplex, so the
/// truncation is an honest quotient complex and `D² = 0` survives. Each
/// reported degree carries a stability flag obtained by recomputing with one
/// more column.
pub fn cyclic_window(
    a: &PresentedAlgebra,
    variant: CyclicVariant,
    window: &Window,
    truncation: usize,
    budget: u64,
) -> Result<HHResult> {
    let top = (window.deg_max.max(0) as usize) + 2 + 2 * (truncation + 1);
    let bar = BarComplex::build(a, top, budget)?;
    let dims_lo = cyclic_dims(&bar, variant, window, truncation);
    let dims_hi = cyclic_dims(&bar, variant, window, truncation + 1);
    let mut space = GradedSpace::new();
    let mut indeterminate = BTreeSet::new();
    for deg in window.degrees() {
        let lo: BTreeMap<i64, usize> = dims_lo
            .iter()
            .filter(|((n, _), _)| *n == deg)
            .map(|((_, w), &d)| (*w, d))
            .collect();
        let hi: BTreeMap<i64, usize> = dims_hi
            .iter()
            .filter(|((n, _), _)| *n == deg)
            .map(|((_, w), &d)| (*w, d))
            .collect();
        if lo == hi {
            for (w, d) in lo {
                space.add_dim(GradeIndex::new(deg, 0, w), d);
            }
        } else {
            indeterminate.insert(deg);
        }
    }
    Ok(HHResult {
        space,
        indeterminate,
    })
}

fn cyclic_dims(
    bar: &BarComplex,
    variant: CyclicVariant,
    window: &Window,
    columns: usize,
) -> BTreeMap<(i64, i64), usize> {
    let top = bar.top_degree as i64;
    // chain degrees m = n + 2j of the u^j summands of total degree n
    let summands = |n: i64| -> Vec<i64> {
        let j_min = match variant {
            CyclicVariant::NegativeCyclic => 0,
            CyclicVariant::Periodic => (-n).div_euclid(2) + i64::from((-n).rem_euclid(2) != 0),
        };
        (j_min..=columns as i64)
            .map(|j| n + 2 * j)
            .filter(|&m| (0..=top).contains(&m))
            .collect()
    };
    let mut weights = BTreeSet::new();
    for n in 0..=bar.top_degree {
        weights.extend(bar.weights_in_degree(n));
    }
    let mut dims = BTreeMap::new();
    for deg in window.degrees() {
        for &w in &weights {
            if w.abs() > window.weight_max {
                continue;
            }
            let d_out = total_differential(bar, &summands(deg), &summands(deg - 1), w);
            let d_in = total_differential(bar, &summands(deg + 1), &summands(deg), w);
            let dim = d_out.cols() - d_out.rank() - d_in.rank();
            if dim > 0 {
                dims.insert((deg, w), dim);
            }
        }
    }
    dims
}

/// `D = b + B` from the degree-`n` summands to the degree-`n−1` summands,
/// restricted to weight `w`.
fn total_differential(bar: &BarComplex, src: &[i64], dst: &[i64], w: i64) -> FpMatrix {
    let p = bar.algebra.modulus;
    let src_dims: Vec<usize> = src.iter().map(|&m| bar.block_dim(m as usize, w)).collect();
    let dst_dims: Vec<usize> = dst.iter().map(|&m| bar.block_dim(m as usize, w)).collect();
    let rows: usize = dst_dims.iter().sum();
    let cols: usize = src_dims.iter().sum();
    let mut out = FpMatrix::zeros(rows, cols, p);
    let offset = |dims: &[usize], i: usize| -> usize { dims[..i].iter().sum() };
    for (si, &m) in src.iter().enumerate() {
        let c0 = offset(&src_dims, si);
        // b component: chain degree m → m−1
        if m >= 1 {
            if let Some(di) = dst.iter().position(|&d| d == m - 1) {
                let blk = bar.b_block(m as usize, w);
                paste(&mut out, &blk, offset(&dst_dims, di), c0);
            }
        }
        // B component: chain degree m → m+1
        if m + 1 <= bar.top_degree as i64 {
            if let Some(di) = dst.iter().position(|&d| d == m + 1) {
                let blk = bar.big_b_block(m as usize, w);
                paste(&mut out, &blk, offset(&dst_dims, di), c0);
            }
        }
    }
    out
}

fn paste(out: &mut FpMatrix, blk: &FpMatrix, r0: usize, c0: usize) {
    for i in 0..blk.rows() {
        for j in 0..blk.cols() {
            let v = blk.get(i, j);
            if v != 0 {
                out.set(r0 + i, c0 + j, v);
            }
        }
    }
}

/// The p-power endomorphism of `HH₀(A) ≅ A`.
pub fn frobenius_on_hh0(a: &PresentedAlgebra) -> FpMatrix {
    crate::algebra::frobenius_on_algebra(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{mu_p, truncated_poly};

    const BUDGET: u64 = 1_000_000;

    fn win(deg_max: i64) -> Window {
        Window {
            deg_min: 0,
            deg_max,
            weight_max: 1000,
        }
    }

    #[test]
    fn bar_identities_hold() {
        for a in [
            truncated_poly(3, 3, 1),
            truncated_poly(2, 2, 1),
            truncated_poly(3, 2, 1),
            mu_p(3).algebra,
        ] {
            let bar = BarComplex::build(&a, 4, BUDGET).unwrap();
            bar.verify_identities().unwrap();
        }
    }

    #[test]
    fn hh_of_ground_field() {
        let k = truncated_poly(3, 1, 0);
        let hh = hochschild_bar(&k, &win(3), BUDGET).unwrap();
        assert_eq!(hh.dim(0), Some(1));
        for n in 1..=3 {
            assert_eq!(hh.dim(n), Some(0));
        }
    }

    #[test]
    fn hh_of_truncated_p3() {
        // k[t]/(t³) over F_3: dims all 3 (f′ = 0)
        let a = truncated_poly(3, 3, 1);
        let hh = hochschild_bar(&a, &win(4), BUDGET).unwrap();
        for n in 0..=4 {
            assert_eq!(hh.dim(n), Some(3), "degree {n}");
        }
    }

    #[test]
    fn hh_of_dual_numbers_p3() {
        // k[t]/(t²) over F_3: dims (2,1,1,1,…)
        let a = truncated_poly(3, 2, 1);
        let hh = hochschild_bar(&a, &win(4), BUDGET).unwrap();
        assert_eq!(hh.dim(0), Some(2));
        for n in 1..=4 {
            assert_eq!(hh.dim(n), Some(1), "degree {n}");
        }
    }

    #[test]
    fn small_oracle_matches_bar() {
        for (p, n) in [(2u64, 2usize), (3, 3), (3, 2)] {
            let a = truncated_poly(p, n, 1);
            let bar = hochschild_bar(&a, &win(4), BUDGET).unwrap();
            let small = hochschild_small(p, n, 1, &win(4)).unwrap();
            for deg in 0..=4i64 {
                assert_eq!(
                    bar.space.weights_in_degree(deg),
                    small.space.weights_in_degree(deg),
                    "p={p} n={n} degree {deg}"
                );
            }
        }
    }

    #[test]
    fn connes_b_on_weight_one_class() {
        // B sends [t] ∈ HH₀ to the nonzero class 1⊗t ∈ HH₁ in weight 1
        let a = truncated_poly(3, 3, 1);
        let bar = BarComplex::build(&a, 2, BUDGET).unwrap();
        let b = bar.big_b_block(0, 1);
        // weight-1 block of C_0 is spanned by t alone; C_1 weight 1 by 1|t
        assert_eq!(b.cols(), 1);
        assert_eq!(b.rows(), 1);
        assert_ne!(b.get(0, 0), 0);
        // and the target is a cycle not a boundary: b_2 weight-1 block is zero
        let b2 = bar.b_block(2, 1);
        assert!(b2.is_zero());
    }

    #[test]
    fn connes_b_kills_unit() {
        let a = truncated_poly(3, 2, 1);
        let bar = BarComplex::build(&a, 2, BUDGET).unwrap();
        let b0 = bar.big_b_block(0, 0);
        assert!(b0.is_zero()); // B(1) = 0
    }

    #[test]
    fn hp_of_ground_field() {
        let k = truncated_poly(3, 1, 0);
        let hp = cyclic_window(
            &k,
            CyclicVariant::Periodic,
            &Window {
                deg_min: -4,
                deg_max: 4,
                weight_max: 10,
            },
            6,
            BUDGET,
        )
        .unwrap();
        for n in -4..=4i64 {
            let expect = if n % 2 == 0 { Some(1) } else { Some(0) };
            assert_eq!(hp.dim(n), expect, "degree {n}");
        }
    }

    #[test]
    fn hc_minus_dual_numbers_p2_stabilizes() {
        // stability holds per weight: each extra u-column only contributes in
        // ever-higher weights, so a bounded weight window pins the dims
        let a = truncated_poly(2, 2, 1);
        let hc = cyclic_window(
            &a,
            CyclicVariant::NegativeCyclic,
            &Window {
                deg_min: 0,
                deg_max: 1,
                weight_max: 5,
            },
            8,
            BUDGET,
        )
        .unwrap();
        // regression values from this model, not an external identity
        assert_eq!(hc.dim(0), Some(3));
        assert!(hc.dim(1).is_some(), "degree 1 did not stabilize");
    }



    #[test]
    fn budget_is_enforced() {
        let a = truncated_poly(5, 5, 1);
        assert!(matches!(
            BarComplex::build(&a, 9, 1_000),
            Err(Error::ResourceExceeded(_))
        ));
    }

    #[test]
    fn tate_d2_weight_one_iso() {
        // the circle action carries the weight-1 degree-0 class [t] to the
        // weight-1 degree-1 class: a 1×1 isomorphism for every p
        for (p, n) in [(2u64, 2usize), (3, 3), (5, 5)] {
            let a = truncated_poly(p, n, 1);
            let blocks = tate_d2(&a, &win(2), BUDGET).unwrap();
            let b01 = &blocks[&(0, 1)];
            assert_eq!(b01.source_dim, 1);
            assert_eq!(b01.target_dim, 1);
            assert_eq!(b01.matrix.rank(), 1);
        }
    }

    #[test]
    fn tate_d2_vanishes_for_ground_field() {
        let a = truncated_poly(3, 1, 1);
        let blocks = tate_d2(&a, &win(4), BUDGET).unwrap();
        for block in blocks.values() {
            assert_eq!(block.matrix.rank(), 0);
        }
    }

    #[test]
    fn tate_d2_vanishes_when_hh_is_degree_zero() {
        // the split semisimple algebra has no higher Hochschild homology, so
        // every induced map has a zero-dimensional target
        let a = crate::algebra::cartier_dual(&mu_p(3)).unwrap().algebra;
        let blocks = tate_d2(&a, &win(3), BUDGET).unwrap();
        assert!(!blocks.is_empty());
        for block in blocks.values() {
            assert_eq!(block.target_dim, 0);
        }
    }

    #[test]
    fn frobenius_on_hh0_examples() {
        let a = truncated_poly(3, 3, 1);
        let f = frobenius_on_hh0(&a);
        assert_eq!(f.column(0), vec![1, 0, 0]);
        assert!(f.column(1).iter().all(|&c| c == 0));
        let b = truncated_poly(2, 4, 1); // k[t]/(t^(p²)): t ↦ t^p
        assert_eq!(frobenius_on_hh0(&b).column(1), vec![0, 0, 1, 0]);
    }
}
