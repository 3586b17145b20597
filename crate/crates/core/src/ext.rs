//! Free resolutions over a finite-dimensional algebra and the Ext-algebra of
//! the trivial module, with Yoneda products computed by chain-map lifting.

use crate::algebra::{HopfAlgebra, PresentedAlgebra};
use crate::error::{Error, Result};
use crate::fp::FpMatrix;
use crate::graded::{BasisVector, CochainComplex};
use std::collections::BTreeMap;

/// Matrix with entries in a presented algebra; `entries[r * cols + c]` is an
/// element in basis coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<u64>>,
}

impl AlgMatrix {
    pub fn zeros(rows: usize, cols: usize, adim: usize) -> Self {
        AlgMatrix {
            rows,
            cols,
            entries: vec![vec![0; adim]; rows * cols],
        }
    }

    pub fn entry(&self, r: usize, c: usize) -> &Vec<u64> {
        &self.entries[r * self.cols + c]
    }

    pub fn set_entry(&mut self, r: usize, c: usize, v: Vec<u64>) {
        self.entries[r * self.cols + c] = v;
    }

    /// Expand to an `F_p` matrix; each entry becomes the regular
    /// representation block of size `dim(A)`.
    pub fn expand(&self, a: &PresentedAlgebra) -> FpMatrix {
        let d = a.dim();
        let mut m = FpMatrix::zeros(self.rows * d, self.cols * d, a.modulus);
        for r in 0..self.rows {
            for c in 0..self.cols {
                let block = a.regular_rep(self.entry(r, c));
                for i in 0..d {
                    for j in 0..d {
                        let v = block.get(i, j);
                        if v != 0 {
                            m.set(r * d + i, c * d + j, v);
                        }
                    }
                }
            }
        }
        m
    }

    /// Apply the augmentation to every entry.
    pub fn eps(&self, a: &PresentedAlgebra) -> Result<FpMatrix> {
        let mut m = FpMatrix::zeros(self.rows, self.cols, a.modulus);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(r, c, a.eps(self.entry(r, c))?);
            }
        }
        Ok(m)
    }

    pub fn compose(&self, other: &AlgMatrix, a: &PresentedAlgebra) -> AlgMatrix {
        assert_eq!(self.cols, other.rows);
        let p = a.modulus;
        let mut out = AlgMatrix::zeros(self.rows, other.cols, a.dim());
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = vec![0u64; a.dim()];
                for k in 0..self.cols {
                    let prod = a.multiply(self.entry(r, k), other.entry(k, c));
                    for (i, v) in prod.into_iter().enumerate() {
                        acc[i] = (acc[i] + v) % p;
                    }
                }
                out.set_entry(r, c, acc);
            }
        }
        out
    }

    /// Apply to an element of the free module `A^cols` (tuple of algebra
    /// elements).
    pub fn apply(&self, v: &[Vec<u64>], a: &PresentedAlgebra) -> Vec<Vec<u64>> {
        assert_eq!(v.len(), self.cols);
        let p = a.modulus;
        (0..self.rows)
            .map(|r| {
                let mut acc = vec![0u64; a.dim()];
                for (c, x) in v.iter().enumerate() {
                    let prod = a.multiply(self.entry(r, c), x);
                    for (i, t) in prod.into_iter().enumerate() {
                        acc[i] = (acc[i] + t) % p;
                    }
                }
                acc
            })
            .collect()
    }
}

/// Free resolution `… → P_1 → P_0 → k` of the trivial module along the
/// augmentation; `diffs[n] : P_{n+1} → P_n`.
#[derive(Debug, Clone)]
pub struct FreeResolution {
    pub algebra: PresentedAlgebra,
    /// weights of the free generators of each `P_n`
    pub gen_weights: Vec<Vec<i64>>,
    pub diffs: Vec<AlgMatrix>,
}

impl FreeResolution {
    pub fn length(&self) -> usize {
        self.gen_weights.len()
    }

    /// `d² = 0` and weight homogeneity of every entry.
    pub fn validate(&self) -> Result<()> {
        let a = &self.algebra;
        for n in 0..self.diffs.len() {
            let d = &self.diffs[n];
            assert_eq!(d.rows, self.gen_weights[n].len());
            assert_eq!(d.cols, self.gen_weights[n + 1].len());
            for r in 0..d.rows {
                for c in 0..d.cols {
                    if let Some(w) = a.weight_of(d.entry(r, c)) {
                        if w + self.gen_weights[n][r] != self.gen_weights[n + 1][c] {
                            return Err(Error::Precondition(format!(
                                "resolution differential {n} not weight-homogeneous at ({r},{c})"
                            )));
                        }
                    }
                }
            }
            if n + 1 < self.diffs.len() {
                let sq = d.compose(&self.diffs[n + 1], a);
                if sq.entries.iter().any(|e| e.iter().any(|&x| x % a.modulus != 0)) {
                    return Err(Error::NotAComplex {
                        degree: n as i64,
                        witness: "free resolution".into(),
                    });
                }
            }
        }
        Ok(())
    }

    /// Exactness of the expanded complex through `P_0, …, P_(len-2)` by rank
    /// counting; `H_0` must be one-dimensional. Intended for small inputs.
    pub fn verify_exact(&self) -> Result<()> {
        let a = &self.algebra;
        let d = a.dim();
        let expanded: Vec<FpMatrix> = self.diffs.iter().map(|m| m.expand(a)).collect();
        if expanded.is_empty() {
            return Ok(());
        }
        let h0 = self.gen_weights[0].len() * d - expanded[0].rank();
        if h0 != 1 {
            return Err(Error::NotExact(0));
        }
        for n in 1..expanded.len() {
            let cycles = self.gen_weights[n].len() * d - expanded[n - 1].rank();
            let boundaries = expanded[n].rank();
            if cycles != boundaries {
                return Err(Error::NotExact(n));
            }
        }
        Ok(())
    }

    /// `Hom_A(P_•, k)` as a cochain complex over `F_p`; term `n` has one basis
    /// vector per generator of `P_n`, of the negated weight.
    pub fn hom_complex(&self) -> Result<CochainComplex> {
        let a = &self.algebra;
        let mut terms = BTreeMap::new();
        terms.insert(-1, Vec::new()); // degree 0 really has no incoming maps
        for (n, ws) in self.gen_weights.iter().enumerate() {
            terms.insert(
                n as i64,
                ws.iter()
                    .enumerate()
                    .map(|(i, &w)| BasisVector {
                        label: format!("P{n}e{i}"),
                        weight: -w,
                    })
                    .collect(),
            );
        }
        let mut differentials = BTreeMap::new();
        for (n, d) in self.diffs.iter().enumerate() {
            differentials.insert(n as i64, d.eps(a)?.transpose());
        }
        Ok(CochainComplex {
            modulus: a.modulus,
            terms,
            differentials,
            // the top Hom-term sees no incoming relations from P_(len), so
            // its cohomology is not certified
            complete: false,
        })
    }
}

/// The 2-periodic resolution of `k` over `k[s]/(s^n)`:
/// `… → A ×s^(n-1) → A ×s → A → k`.
pub fn periodic_resolution(
    p: u64,
    n: usize,
    weight_of_s: i64,
    length: usize,
) -> FreeResolution {
    let a = crate::algebra::truncated_poly(p, n, weight_of_s);
    let mut s = vec![0u64; n];
    if n > 1 {
        s[1] = 1;
    }
    let mut s_top = vec![0u64; n];
    s_top[n - 1] = 1; // s^(n-1)
    let mut gen_weights = Vec::new();
    let mut diffs = Vec::new();
    for deg in 0..length {
        let i = (deg / 2) as i64;
        let w = if deg % 2 == 0 {
            i * n as i64 * weight_of_s
        } else {
            i * n as i64 * weight_of_s + weight_of_s
        };
        gen_weights.push(vec![w]);
        if deg + 1 < length {
            let mut m = AlgMatrix::zeros(1, 1, n);
            m.set_entry(0, 0, if deg % 2 == 0 { s.clone() } else { s_top.clone() });
            diffs.push(m);
        }
    }
    FreeResolution {
        algebra: a,
        gen_weights,
        diffs,
    }
}

/// The normalized bar resolution `B_n = A ⊗ Ī^⊗n` through homological degree
/// `length - 1`. Requires the unit to be the basis vector `e_0`.
pub fn bar_resolution(a: &PresentedAlgebra, length: usize) -> Result<FreeResolution> {
    let p = a.modulus;
    let n = a.dim();
    if n < 1 {
        return Err(Error::Precondition("empty algebra".into()));
    }
    a.eps(&a.unit())?; // require an augmentation
    let red = n - 1; // dim of the augmentation ideal
    // reduced basis elements ē_i = e_i − ε(e_i)·1 for i = 1..n-1
    let reduced: Vec<Vec<u64>> = (1..n)
        .map(|i| {
            let mut v = vec![0u64; n];
            v[i] = 1;
            let e = a.eps(&v).unwrap();
            v[0] = (p - e % p) % p;
            v
        })
        .collect();
    // product of two reduced elements, split into (unit part, reduced coords)
    let split = |x: &[u64]| -> (u64, Vec<u64>) {
        let e = a.eps(x).unwrap();
        (e, x[1..].to_vec())
    };
    let tuples = |len: usize| -> Vec<Vec<usize>> {
        let mut out = vec![vec![]];
        for _ in 0..len {
            out = out
                .into_iter()
                .flat_map(|t| {
                    (0..red).map(move |i| {
                        let mut t2 = t.clone();
                        t2.push(i);
                        t2
                    })
                })
                .collect();
        }
        out
    };
    let mut gen_weights = Vec::new();
    let mut diffs = Vec::new();
    for deg in 0..length {
        let ts = tuples(deg);
        gen_weights.push(
            ts.iter()
                .map(|t| t.iter().map(|&i| a.weights[i + 1]).sum())
                .collect::<Vec<i64>>(),
        );
        if deg == 0 {
            continue;
        }
        let rows_idx: BTreeMap<Vec<usize>, usize> = tuples(deg - 1)
            .into_iter()
            .enumerate()
            .map(|(i, t)| (t, i))
            .collect();
        let mut m = AlgMatrix::zeros(rows_idx.len(), ts.len(), n);
        for (c, t) in ts.iter().enumerate() {
            // face 0: coefficient ē_(t0) on the truncated tuple
            let r0 = rows_idx[&t[1..].to_vec()];
            let mut e = m.entry(r0, c).clone();
            for (i, &v) in reduced[t[0]].iter().enumerate() {
                e[i] = (e[i] + v) % p;
            }
            m.set_entry(r0, c, e);
            // inner faces: merge slots j, j+1 and project to Ī
            for j in 0..deg - 1 {
                let prod = a.multiply(&reduced[t[j]], &reduced[t[j + 1]]);
                let (_, rc) = split(&prod);
                let sign = if (j + 1) % 2 == 0 { 1 } else { p - 1 };
                for (i, &coef) in rc.iter().enumerate() {
                    if coef == 0 {
                        continue;
                    }
                    let mut merged = Vec::with_capacity(deg - 1);
                    merged.extend_from_slice(&t[..j]);
                    merged.push(i);
                    merged.extend_from_slice(&t[j + 2..]);
                    let r = rows_idx[&merged];
                    let mut e = m.entry(r, c).clone();
                    e[0] = (e[0] + sign * coef) % p;
                    m.set_entry(r, c, e);
                }
            }
            // the last face applies ε to a reduced slot and vanishes
        }
        diffs.push(m);
    }
    Ok(FreeResolution {
        algebra: a.clone(),
        gen_weights,
        diffs,
    })
}

/// A cocycle in `Ext^m`, as a functional on the generators of `P_m`.
pub type Cocycle = Vec<u64>;

/// Yoneda product `ψ · φ ∈ Ext^(m+n)` of `φ ∈ Ext^m`, `ψ ∈ Ext^n`,
/// computed by lifting `φ` to a chain map `P_(m+•) → P_•` degree by degree
/// with deterministic preimages.
pub fn yoneda_product(
    res: &FreeResolution,
    m: usize,
    phi: &Cocycle,
    n: usize,
    psi: &Cocycle,
) -> Result<Cocycle> {
    let a = &res.algebra;
    let p = a.modulus;
    if m + n >= res.length() {
        return Err(Error::Precondition(
            "resolution too short for this product".into(),
        ));
    }
    // φ_0 : P_m → P_0 = A lifting φ through ε: generator g ↦ φ(g)·1
    let r0 = res.gen_weights[0].len();
    assert_eq!(r0, 1, "resolution must start from a single generator");
    let mut lift = AlgMatrix::zeros(1, phi.len(), a.dim());
    for (c, &v) in phi.iter().enumerate() {
        let mut unit = vec![0u64; a.dim()];
        unit[0] = v % p;
        lift.set_entry(0, c, unit);
    }
    for j in 0..n {
        // want φ_(j+1) : P_(m+j+1) → P_(j+1) with d_j ∘ φ_(j+1) = φ_j ∘ d_(m+j)
        let rhs = lift.compose(&res.diffs[m + j], a);
        let target_d = res.diffs[j].expand(a);
        let d_a = a.dim();
        let next_cols = res.gen_weights[m + j + 1].len();
        let next_rows = res.gen_weights[j + 1].len();
        let mut next = AlgMatrix::zeros(next_rows, next_cols, d_a);
        for c in 0..next_cols {
            let mut v = vec![0u64; rhs.rows * d_a];
            for r in 0..rhs.rows {
                v[r * d_a..(r + 1) * d_a].copy_from_slice(rhs.entry(r, c));
            }
            let x = target_d
                .solve(&v)
                .ok_or(Error::LiftFailed(j + 1))?;
            for r in 0..next_rows {
                next.set_entry(r, c, x[r * d_a..(r + 1) * d_a].to_vec());
            }
        }
        lift = next;
    }
    // compose with ψ: the functional g ↦ Σ_r ψ_r ε(lift_(r,g))
    let top = lift.eps(a)?;
    let mut out = vec![0u64; res.gen_weights[m + n].len()];
    for (c, o) in out.iter_mut().enumerate() {
        let mut acc = 0u64;
        for (r, &s) in psi.iter().enumerate() {
            acc = (acc + s % p * top.get(r, c)) % p;
        }
        *o = acc;
    }
    Ok(out)
}

/// Shape of the Ext-algebra of the trivial module.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExtShape {
    /// semisimple algebra: Ext concentrated in degree 0
    Trivial,
    /// `E(α) ⊗ P(β)`, `α` in degree 1, `β` in degree 2
    ExteriorPolynomial { alpha_weight: i64, beta_weight: i64 },
    /// `P(α)` on a single degree-1 generator (`α² = β`)
    Polynomial { alpha_weight: i64 },
}

/// Recognize a local monogenic algebra `k[s]/(s^n)` and return `(n, weight
/// of s, the power basis change)`; `None` if not of this form.
fn monogenic_structure(a: &PresentedAlgebra) -> Option<(usize, i64)> {
    let n = a.dim();
    if n == 1 {
        return Some((1, 0));
    }
    if a.nilradical_dim() != n - 1 {
        return None;
    }
    // candidate generator: first basis vector in Ī \ Ī²
    let mut s = vec![0u64; n];
    s[1] = 1;
    let e = a.eps(&s).ok()?;
    s[0] = (a.modulus - e % a.modulus) % a.modulus;
    // powers of s must span
    let pows: Vec<Vec<u64>> = (0..n).map(|k| a.power(&s, k as u64)).collect();
    let m = FpMatrix::from_cols(&pows, n, a.modulus);
    if m.rank() != n {
        return None;
    }
    if a.power(&s, n as u64).iter().any(|&c| c % a.modulus != 0) {
        return None;
    }
    a.weight_of(&s).map(|w| (n, w))
}

/// The Ext-algebra of `k` over the (dual) Hopf algebra, with weights.
///
/// Covers the split semisimple and monogenic local cases, which is what
/// Cartier duals of `μ_p` and `α_p` produce.
pub fn ext_of_dual(h: &HopfAlgebra) -> Result<ExtShape> {
    let a = &h.algebra;
    if a.nilradical_dim() == 0 {
        return Ok(ExtShape::Trivial);
    }
    let (n, w) = monogenic_structure(a).ok_or_else(|| {
        Error::Unsupported("Ext ring only computed for semisimple or monogenic local algebras".into())
    })?;
    let res = periodic_resolution(a.modulus, n, w, 5);
    res.validate()?;
    res.verify_exact()?;
    // Ext^1 and Ext^2 are each one-dimensional with the dual weights
    let alpha_weight = -res.gen_weights[1][0];
    let beta_weight = -res.gen_weights[2][0];
    let alpha: Cocycle = vec![1];
    let sq = yoneda_product(&res, 1, &alpha, 1, &alpha)?;
    if sq.iter().all(|&c| c % a.modulus == 0) {
        Ok(ExtShape::ExteriorPolynomial {
            alpha_weight,
            beta_weight,
        })
    } else {
        Ok(ExtShape::Polynomial { alpha_weight })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{alpha_p, cartier_dual, mu_p, truncated_poly};
    use crate::graded::Window;

    #[test]
    fn periodic_resolution_is_exact() {
        for (p, n) in [(2u64, 2usize), (3, 3), (5, 5), (3, 2)] {
            let res = periodic_resolution(p, n, -1, 6);
            res.validate().unwrap();
            res.verify_exact().unwrap();
        }
    }

    #[test]
    fn periodic_generator_weights() {
        let res = periodic_resolution(3, 3, -1, 6);
        let ws: Vec<i64> = res.gen_weights.iter().map(|v| v[0]).collect();
        assert_eq!(ws, vec![0, -1, -3, -4, -6, -7]);
    }

    #[test]
    fn bar_resolution_is_exact_small() {
        for (p, n) in [(2u64, 2usize), (3, 3), (2, 4)] {
            let a = truncated_poly(p, n, 1);
            let res = bar_resolution(&a, 5).unwrap();
            res.validate().unwrap();
            res.verify_exact().unwrap();
        }
        let res = bar_resolution(&mu_p(3).algebra, 4).unwrap();
        res.validate().unwrap();
        res.verify_exact().unwrap();
    }

    #[test]
    fn bar_and_periodic_ext_agree() {
        for p in [2u64, 3] {
            let a = truncated_poly(p, p as usize, -1);
            let bar = bar_resolution(&a, 5).unwrap();
            let hom = bar.hom_complex().unwrap();
            let coh = hom
                .cohomology(Window {
                    deg_min: 0,
                    deg_max: 4,
                    weight_max: 64,
                })
                .unwrap();
            let per = periodic_resolution(p, p as usize, -1, 6);
            for deg in 0..=3i64 {
                assert_eq!(coh.dim(deg), Some(1), "p={p} deg={deg}");
                // weights match the periodic minimal resolution
                let w = coh.space.weights_in_degree(deg);
                assert_eq!(w, vec![(-per.gen_weights[deg as usize][0], 1)]);
            }
        }
    }

    #[test]
    fn ext_over_semisimple_vanishes() {
        for p in [2u64, 3, 5] {
            let d = cartier_dual(&mu_p(p)).unwrap();
            assert_eq!(ext_of_dual(&d).unwrap(), ExtShape::Trivial);
            // oracle through the bar resolution at p = 3
            if p == 3 {
                let bar = bar_resolution(&d.algebra, 4).unwrap();
                let coh = bar
                    .hom_complex()
                    .unwrap()
                    .cohomology(Window {
                        deg_min: 0,
                        deg_max: 3,
                        weight_max: 16,
                    })
                    .unwrap();
                assert_eq!(coh.dim(0), Some(1));
                assert_eq!(coh.dim(1), Some(0));
                assert_eq!(coh.dim(2), Some(0));
            }
        }
    }

    #[test]
    fn ext_of_alpha_p_duals() {
        // odd p: exterior times polynomial, α weight 1, β weight p
        for p in [3u64, 5] {
            let d = cartier_dual(&alpha_p(p, 1)).unwrap();
            assert_eq!(
                ext_of_dual(&d).unwrap(),
                ExtShape::ExteriorPolynomial {
                    alpha_weight: 1,
                    beta_weight: p as i64
                }
            );
        }
        // p = 2: α² = β, a polynomial algebra on α
        let d = cartier_dual(&alpha_p(2, 1)).unwrap();
        assert_eq!(ext_of_dual(&d).unwrap(), ExtShape::Polynomial { alpha_weight: 1 });
    }

    #[test]
    fn yoneda_products_in_periodic_ext() {
        // α·β = β·α ≠ 0 and β^k ≠ 0 for k[s]/(s^p), p = 3
        let res = periodic_resolution(3, 3, -1, 8);
        let one: Cocycle = vec![1];
        let ab = yoneda_product(&res, 1, &one, 2, &one).unwrap();
        let ba = yoneda_product(&res, 2, &one, 1, &one).unwrap();
        assert_eq!(ab.len(), 1);
        assert_ne!(ab[0] % 3, 0);
        assert_eq!(ab, ba);
        let b2 = yoneda_product(&res, 2, &one, 2, &one).unwrap();
        assert_ne!(b2[0] % 3, 0);
        // and α² = 0
        let a2 = yoneda_product(&res, 1, &one, 1, &one).unwrap();
        assert_eq!(a2[0] % 3, 0);
    }

    #[test]
    fn yoneda_alpha_squared_p2() {
        let res = periodic_resolution(2, 2, -1, 6);
        let one: Cocycle = vec![1];
        let a2 = yoneda_product(&res, 1, &one, 1, &one).unwrap();
        assert_eq!(a2, vec![1]);
    }
}
