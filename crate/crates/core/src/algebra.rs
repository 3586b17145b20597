//! Finite-dimensional weighted commutative algebras with optional Hopf
//! structure: Cartier duality, the hypersurface cotangent complex, dlog and
//! the Frobenius endomorphism.
//!
//! All structure is carried by structure constants over `F_p`; every axiom
//! (associativity, Hopf laws) is checked as a finite identity.

use crate::error::{Error, Result};
use crate::fp::{is_prime, FpMatrix};

/// Commutative algebra presented by structure constants on a weighted basis.
///
/// The unit is always the basis vector `e_0`. `structure[(i*n + j)*n + k]` is
/// the coefficient of `e_k` in `e_i · e_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresentedAlgebra {
    pub modulus: u64,
    pub basis: Vec<String>,
    pub weights: Vec<i64>,
    structure: Vec<u64>,
    /// algebra map to k, as a functional on the basis
    pub augmentation: Option<Vec<u64>>,
}

impl PresentedAlgebra {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> u64 {
        let n = self.dim();
        self.structure[(i * n + j) * n + k]
    }

    pub fn unit(&self) -> Vec<u64> {
        let mut u = vec![0; self.dim()];
        u[0] = 1;
        u
    }

    pub fn multiply(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        let n = self.dim();
        let p = self.modulus;
        let mut out = vec![0u64; n];
        for i in 0..n {
            if x[i] == 0 {
                continue;
            }
            for j in 0..n {
                if y[j] == 0 {
                    continue;
                }
                let c = x[i] % p * (y[j] % p) % p;
                for k in 0..n {
                    let s = self.structure_constant(i, j, k);
                    if s != 0 {
                        out[k] = (out[k] + c * s) % p;
                    }
                }
            }
        }
        out
    }

    pub fn power(&self, x: &[u64], e: u64) -> Vec<u64> {
        let mut acc = self.unit();
        for _ in 0..e {
            acc = self.multiply(&acc, x);
        }
        acc
    }

    /// Left-regular representation of `x` as an `F_p`-matrix (columns are
    /// `x · e_j`).
    pub fn regular_rep(&self, x: &[u64]) -> FpMatrix {
        let n = self.dim();
        let mut m = FpMatrix::zeros(n, n, self.modulus);
        for j in 0..n {
            let mut ej = vec![0; n];
            ej[j] = 1;
            let col = self.multiply(x, &ej);
            for (i, v) in col.into_iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn eps(&self, x: &[u64]) -> Result<u64> {
        let aug = self
            .augmentation
            .as_ref()
            .ok_or_else(|| Error::Precondition("algebra has no augmentation".into()))?;
        let p = self.modulus;
        Ok(x.iter()
            .zip(aug)
            .fold(0u64, |acc, (&a, &b)| (acc + a % p * (b % p)) % p))
    }

    /// Weight of a homogeneous element, if it is homogeneous.
    pub fn weight_of(&self, x: &[u64]) -> Option<i64> {
        let mut w = None;
        for (i, &c) in x.iter().enumerate() {
            if c % self.modulus != 0 {
                match w {
                    None => w = Some(self.weights[i]),
                    Some(v) if v != self.weights[i] => return None,
                    _ => {}
                }
            }
        }
        w
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| {
            (0..n).all(|j| (0..n).all(|k| self.structure_constant(i, j, k) == self.structure_constant(j, i, k)))
        })
    }

    /// Associativity, unitality, weight additivity, augmentation
    /// multiplicativity — all as structure-constant identities.
    pub fn validate(&self) -> Result<()> {
        let n = self.dim();
        let one = self.unit();
        for j in 0..n {
            let mut ej = vec![0; n];
            ej[j] = 1;
            if self.multiply(&one, &ej) != ej || self.multiply(&ej, &one) != ej {
                return Err(Error::Precondition(format!("unit law fails on e_{j}")));
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if self.structure_constant(i, j, k) != 0
                        && self.weights[i] + self.weights[j] != self.weights[k]
                    {
                        return Err(Error::Precondition(format!(
                            "multiplication does not respect weights at ({i},{j},{k})"
                        )));
                    }
                }
                let mut ei = vec![0; n];
                ei[i] = 1;
                let mut ej = vec![0; n];
                ej[j] = 1;
                for l in 0..n {
                    let mut el = vec![0; n];
                    el[l] = 1;
                    let lhs = self.multiply(&self.multiply(&ei, &ej), &el);
                    let rhs = self.multiply(&ei, &self.multiply(&ej, &el));
                    if lhs != rhs {
                        return Err(Error::Precondition(format!(
                            "associativity fails at ({i},{j},{l})"
                        )));
                    }
                }
            }
        }
        if self.augmentation.is_some() {
            for i in 0..n {
                for j in 0..n {
                    let mut ei = vec![0; n];
                    ei[i] = 1;
                    let mut ej = vec![0; n];
                    ej[j] = 1;
                    let lhs = self.eps(&self.multiply(&ei, &ej))?;
                    let rhs = self.eps(&ei)? * self.eps(&ej)? % self.modulus;
                    if lhs != rhs {
                        return Err(Error::Precondition(format!(
                            "augmentation not multiplicative at ({i},{j})"
                        )));
                    }
                }
            }
            if self.eps(&self.unit())? != 1 {
                return Err(Error::Precondition("augmentation(1) ≠ 1".into()));
            }
        }
        Ok(())
    }

    /// Dimension of the nilradical, computed as the kernel of the iterated
    /// p-power map `x ↦ x^(p^m)` with `p^m ≥ dim` (linear since `k = F_p`).
    pub fn nilradical_dim(&self) -> usize {
        let p = self.modulus;
        let mut frob = frobenius_on_algebra(self);
        let mut q = p;
        while (q as usize) < self.dim() {
            frob = frobenius_matrix_applied(self, &frob);
            q *= p;
        }
        frob.kernel_basis().cols()
    }

    /// Is `x` invertible? Returns the inverse if so.
    pub fn try_inverse(&self, x: &[u64]) -> Option<Vec<u64>> {
        self.regular_rep(x).solve(&self.unit())
    }
}

fn frobenius_matrix_applied(a: &PresentedAlgebra, prev: &FpMatrix) -> FpMatrix {
    // one more p-power applied to the columns of `prev`
    let n = a.dim();
    let mut m = FpMatrix::zeros(n, n, a.modulus);
    for j in 0..n {
        let col = prev.column(j);
        let powered = a.power(&col, a.modulus);
        for (i, v) in powered.into_iter().enumerate() {
            m.set(i, j, v);
        }
    }
    m
}

/// The k-linear p-power map on basis elements (`k = F_p`, so this is honest
/// linearity, no semilinear bookkeeping).
pub fn frobenius_on_algebra(a: &PresentedAlgebra) -> FpMatrix {
    let n = a.dim();
    let mut m = FpMatrix::zeros(n, n, a.modulus);
    for j in 0..n {
        let mut ej = vec![0; n];
        ej[j] = 1;
        let col = a.power(&ej, a.modulus);
        for (i, v) in col.into_iter().enumerate() {
            m.set(i, j, v);
        }
    }
    m
}

/// Comultiplication, counit and antipode as structure constants.
///
/// `comult[(i*n + j)*n + k]` is the coefficient of `e_j ⊗ e_k` in `Δ(e_i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HopfData {
    pub comult: Vec<u64>,
    pub counit: Vec<u64>,
    pub antipode: FpMatrix,
}

impl HopfData {
    pub fn comult_coeff(&self, n: usize, i: usize, j: usize, k: usize) -> u64 {
        self.comult[(i * n + j) * n + k]
    }
}

/// A commutative algebra together with Hopf structure; models `O(G)` for a
/// finite commutative group scheme `G`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HopfAlgebra {
    pub algebra: PresentedAlgebra,
    pub hopf: HopfData,
}

impl HopfAlgebra {
    /// All Hopf axioms as exact structure-constant identities.
    pub fn validate(&self) -> Result<()> {
        self.algebra.validate()?;
        let n = self.algebra.dim();
        let p = self.algebra.modulus;
        let h = &self.hopf;
        // coassociativity: (Δ⊗id)Δ = (id⊗Δ)Δ on each basis vector
        for i in 0..n {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        let mut lhs = 0u64;
                        let mut rhs = 0u64;
                        for m in 0..n {
                            lhs = (lhs
                                + h.comult_coeff(n, i, m, c) * h.comult_coeff(n, m, a, b))
                                % p;
                            rhs = (rhs
                                + h.comult_coeff(n, i, a, m) * h.comult_coeff(n, m, b, c))
                                % p;
                        }
                        if lhs != rhs {
                            return Err(Error::HopfAxiom(format!(
                                "coassociativity at e_{i} component ({a},{b},{c})"
                            )));
                        }
                    }
                }
            }
        }
        // counit law: (ε⊗id)Δ = id
        for i in 0..n {
            for k in 0..n {
                let mut s = 0u64;
                let mut s2 = 0u64;
                for j in 0..n {
                    s = (s + h.counit[j] * h.comult_coeff(n, i, j, k)) % p;
                    s2 = (s2 + h.counit[j] * h.comult_coeff(n, i, k, j)) % p;
                }
                let expect = u64::from(i == k);
                if s != expect || s2 != expect {
                    return Err(Error::HopfAxiom(format!("counit law at e_{i}")));
                }
            }
        }
        // bialgebra: Δ is an algebra map; Δ(1) = 1⊗1; ε multiplicative
        for i in 0..n {
            for j in 0..n {
                // Δ(e_i e_j) vs Δ(e_i)Δ(e_j), componentwise in e_a⊗e_b
                for a in 0..n {
                    for b in 0..n {
                        let mut lhs = 0u64;
                        for k in 0..n {
                            lhs = (lhs
                                + self.algebra.structure_constant(i, j, k)
                                    * h.comult_coeff(n, k, a, b))
                                % p;
                        }
                        let mut rhs = 0u64;
                        for a1 in 0..n {
                            for b1 in 0..n {
                                let c1 = h.comult_coeff(n, i, a1, b1);
                                if c1 == 0 {
                                    continue;
                                }
                                for a2 in 0..n {
                                    for b2 in 0..n {
                                        let c2 = h.comult_coeff(n, j, a2, b2);
                                        if c2 == 0 {
                                            continue;
                                        }
                                        let m1 = self.algebra.structure_constant(a1, a2, a);
                                        let m2 = self.algebra.structure_constant(b1, b2, b);
                                        rhs = (rhs + c1 * c2 % p * m1 % p * m2) % p;
                                    }
                                }
                            }
                        }
                        if lhs != rhs {
                            return Err(Error::HopfAxiom(format!(
                                "comultiplication not an algebra map at ({i},{j})"
                            )));
                        }
                    }
                }
            }
        }
        // antipode: m(S⊗id)Δ = η∘ε
        for i in 0..n {
            let mut out = vec![0u64; n];
            for a in 0..n {
                for b in 0..n {
                    let c = h.comult_coeff(n, i, a, b);
                    if c == 0 {
                        continue;
                    }
                    let sa = h.antipode.column(a);
                    let mut eb = vec![0; n];
                    eb[b] = 1;
                    let prod = self.algebra.multiply(&sa, &eb);
                    for (k, v) in prod.into_iter().enumerate() {
                        out[k] = (out[k] + c * v) % p;
                    }
                }
            }
            let mut expect = vec![0u64; n];
            expect[0] = h.counit[i] % p;
            if out != expect {
                return Err(Error::HopfAxiom(format!("antipode law at e_{i}")));
            }
        }
        Ok(())
    }

    pub fn is_cocommutative(&self) -> bool {
        let n = self.algebra.dim();
        (0..n).all(|i| {
            (0..n).all(|j| {
                (0..n).all(|k| {
                    self.hopf.comult_coeff(n, i, j, k) == self.hopf.comult_coeff(n, i, k, j)
                })
            })
        })
    }
}

fn binom_mod(n: u64, k: u64, p: u64) -> u64 {
    // Lucas
    if k > n {
        return 0;
    }
    let (mut n, mut k) = (n, k);
    let mut acc = 1u64;
    while n > 0 || k > 0 {
        let (ni, ki) = (n % p, k % p);
        if ki > ni {
            return 0;
        }
        let mut c = 1u64;
        for i in 0..ki {
            c = c * ((ni - i) % p) % p;
            c = c * crate::fp::pow_mod(i + 1, p - 2, p) % p;
        }
        acc = acc * c % p;
        n /= p;
        k /= p;
    }
    acc
}

/// `k[t]/(t^n)` with basis `1, t, …, t^(n-1)`, `t` of the given weight, and
/// augmentation `t ↦ 0`.
pub fn truncated_poly(p: u64, n: usize, weight_of_t: i64) -> PresentedAlgebra {
    assert!(n >= 1);
    assert!(is_prime(p));
    let dim = n;
    let mut structure = vec![0u64; dim * dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            if i + j < dim {
                structure[(i * dim + j) * dim + i + j] = 1;
            }
        }
    }
    let mut aug = vec![0u64; dim];
    aug[0] = 1;
    PresentedAlgebra {
        modulus: p,
        basis: (0..dim)
            .map(|i| if i == 0 { "1".into() } else { format!("t^{i}") })
            .collect(),
        weights: (0..dim).map(|i| i as i64 * weight_of_t).collect(),
        structure,
        augmentation: Some(aug),
    }
}

/// `O(α_p) = k[t]/(t^p)` with `t` primitive of weight `weight_of_t`.
pub fn alpha_p(p: u64, weight_of_t: i64) -> HopfAlgebra {
    let algebra = truncated_poly(p, p as usize, weight_of_t);
    let n = algebra.dim();
    let mut comult = vec![0u64; n * n * n];
    for i in 0..n {
        // Δ(t^i) = Σ C(i,j) t^j ⊗ t^(i-j)
        for j in 0..=i {
            comult[(i * n + j) * n + (i - j)] = binom_mod(i as u64, j as u64, p);
        }
    }
    let mut counit = vec![0u64; n];
    counit[0] = 1;
    // S(t) = -t
    let mut antipode = FpMatrix::zeros(n, n, p);
    for i in 0..n {
        let sign = if i % 2 == 0 { 1 } else { p - 1 };
        antipode.set(i, i, sign);
    }
    HopfAlgebra {
        algebra,
        hopf: HopfData {
            comult,
            counit,
            antipode,
        },
    }
}

/// `O(μ_p) = k[x]/(x^p − 1)` with `x` grouplike; weight 0 throughout.
pub fn mu_p(p: u64) -> HopfAlgebra {
    let n = p as usize;
    let mut structure = vec![0u64; n * n * n];
    for i in 0..n {
        for j in 0..n {
            structure[(i * n + j) * n + (i + j) % n] = 1;
        }
    }
    // augmentation x ↦ 1
    let aug = vec![1u64; n];
    let algebra = PresentedAlgebra {
        modulus: p,
        basis: (0..n)
            .map(|i| if i == 0 { "1".into() } else { format!("x^{i}") })
            .collect(),
        weights: vec![0; n],
        structure,
        augmentation: Some(aug),
    };
    let mut comult = vec![0u64; n * n * n];
    for i in 0..n {
        comult[(i * n + i) * n + i] = 1; // Δ(x^i) = x^i ⊗ x^i
    }
    let counit = vec![1u64; n];
    let mut antipode = FpMatrix::zeros(n, n, p);
    for i in 0..n {
        antipode.set((n - i) % n, i, 1); // S(x^i) = x^(-i)
    }
    HopfAlgebra {
        algebra,
        hopf: HopfData {
            comult,
            counit,
            antipode,
        },
    }
}

/// Cartier duality: linear dual with multiplication/comultiplication
/// structure constants transposed; weights are negated.
pub fn cartier_dual(h: &HopfAlgebra) -> Result<HopfAlgebra> {
    h.validate()?;
    if !h.algebra.is_commutative() || !h.is_cocommutative() {
        return Err(Error::HopfAxiom(
            "Cartier duality needs a commutative and cocommutative input".into(),
        ));
    }
    let n = h.algebra.dim();
    let p = h.algebra.modulus;
    let mut structure = vec![0u64; n * n * n];
    let mut comult = vec![0u64; n * n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                // e*_i · e*_j has e*_k coefficient Δ(e_k)_(i,j)
                structure[(i * n + j) * n + k] = h.hopf.comult_coeff(n, k, i, j);
                comult[(i * n + j) * n + k] = h.algebra.structure_constant(j, k, i);
            }
        }
    }
    // the dual's unit is ε; re-order the basis so that the unit is e_0
    let counit_vec = h.hopf.counit.clone();
    // find the expression of ε in the dual basis: it's literally counit_vec
    // as coordinates. We require it to be a standard basis vector after a
    // change of basis; instead of a general change of basis we handle the
    // common case ε = e*_0 and otherwise conjugate by a basis change.
    let dual_unit: Vec<u64> = counit_vec.iter().map(|&c| c % p).collect();
    let is_e0 = dual_unit[0] == 1 && dual_unit[1..].iter().all(|&c| c == 0);
    let mut dual = HopfAlgebra {
        algebra: PresentedAlgebra {
            modulus: p,
            basis: h.algebra.basis.iter().map(|b| format!("{b}^")).collect(),
            weights: h.algebra.weights.iter().map(|w| -w).collect(),
            structure,
            augmentation: Some(h.algebra.unit()),
        },
        hopf: HopfData {
            comult,
            counit: h.algebra.unit(),
            antipode: h.hopf.antipode.transpose(),
        },
    };
    if !is_e0 {
        dual = change_basis_to_unit(&dual, &dual_unit)?;
    }
    dual.validate()?;
    Ok(dual)
}

/// Re-express a Hopf algebra in a basis whose first vector is the given unit.
fn change_basis_to_unit(h: &HopfAlgebra, unit: &[u64]) -> Result<HopfAlgebra> {
    let n = h.algebra.dim();
    let p = h.algebra.modulus;
    // new basis: unit, then the standard vectors that keep it a basis
    let mut cols = vec![unit.to_vec()];
    let mut chosen = Vec::new();
    for j in 0..n {
        let mut ej = vec![0u64; n];
        ej[j] = 1;
        let cand: Vec<Vec<u64>> = cols.iter().cloned().chain([ej.clone()]).collect();
        let m = FpMatrix::from_cols(&cand, n, p);
        if m.rank() == cand.len() {
            cols.push(ej);
            chosen.push(j);
        }
        if cols.len() == n {
            break;
        }
    }
    let change = FpMatrix::from_cols(&cols, n, p); // new -> old coordinates
    let n_inv = invert_matrix(&change)?; // old -> new
    let to_old = |v: &[u64]| change.mul_vec(v);
    let to_new = |v: &[u64]| n_inv.mul_vec(v);
    let mut structure = vec![0u64; n * n * n];
    let mut comult = vec![0u64; n * n * n];
    for i in 0..n {
        let mut ei = vec![0u64; n];
        ei[i] = 1;
        let old_i = to_old(&ei);
        for j in 0..n {
            let mut ej = vec![0u64; n];
            ej[j] = 1;
            let old_j = to_old(&ej);
            let prod_old = h.algebra.multiply(&old_i, &old_j);
            for (k, v) in to_new(&prod_old).into_iter().enumerate() {
                structure[(i * n + j) * n + k] = v;
            }
        }
        // Δ in the new basis
        for a in 0..n {
            for b in 0..n {
                let mut acc = 0u64;
                // Δ(new_i) = Σ_old coords; transport both tensor legs
                for oi in 0..n {
                    if old_i[oi] == 0 {
                        continue;
                    }
                    for oa in 0..n {
                        for ob in 0..n {
                            let c = h.hopf.comult_coeff(n, oi, oa, ob);
                            if c == 0 {
                                continue;
                            }
                            let mut eoa = vec![0u64; n];
                            eoa[oa] = 1;
                            let na = to_new(&eoa);
                            let mut eob = vec![0u64; n];
                            eob[ob] = 1;
                            let nb = to_new(&eob);
                            acc = (acc + old_i[oi] * c % p * na[a] % p * nb[b]) % p;
                        }
                    }
                }
                comult[(i * n + a) * n + b] = acc;
            }
        }
    }
    let counit: Vec<u64> = (0..n)
        .map(|i| {
            let mut ei = vec![0u64; n];
            ei[i] = 1;
            let old = to_old(&ei);
            old.iter()
                .zip(&h.hopf.counit)
                .fold(0u64, |acc, (&a, &b)| (acc + a * b) % p)
        })
        .collect();
    let antipode = n_inv.mul(&h.hopf.antipode).mul(&change);
    let aug: Vec<u64> = (0..n)
        .map(|i| {
            let mut ei = vec![0u64; n];
            ei[i] = 1;
            let old = to_old(&ei);
            let a = h.algebra.augmentation.as_ref().unwrap();
            old.iter()
                .zip(a)
                .fold(0u64, |acc, (&x, &y)| (acc + x * y) % p)
        })
        .collect();
    let weights = vec![0; n]; // basis change only done in the weight-0 case
    for w in &h.algebra.weights {
        if *w != 0 {
            return Err(Error::Unsupported(
                "basis change with nonzero weights".into(),
            ));
        }
    }
    Ok(HopfAlgebra {
        algebra: PresentedAlgebra {
            modulus: p,
            basis: (0..n).map(|i| format!("f{i}")).collect(),
            weights,
            structure,
            augmentation: Some(aug),
        },
        hopf: HopfData {
            comult,
            counit,
            antipode,
        },
    })
}

fn invert_matrix(m: &FpMatrix) -> Result<FpMatrix> {
    let n = m.rows();
    let aug = m.hstack(&FpMatrix::identity(n, m.modulus()));
    let (r, pivots) = aug.rref();
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return Err(Error::NotAUnit("matrix not invertible".into()));
    }
    let mut inv = FpMatrix::zeros(n, n, m.modulus());
    for i in 0..n {
        for j in 0..n {
            inv.set(i, j, r.get(i, n + j));
        }
    }
    Ok(inv)
}

/// Hypersurface presentation `k[t]/(f)`, `f` monic of degree `d ≥ 1`.
#[derive(Debug, Clone)]
pub struct MonogenicPresentation {
    pub modulus: u64,
    /// coefficients of the monic relation `f = t^d + rel[d-1] t^(d-1) + … + rel[0]`
    pub rel: Vec<u64>,
    pub weight_of_t: i64,
    /// augmentation point `a` with `f(a) = 0`
    pub aug_point: u64,
}

impl MonogenicPresentation {
    pub fn degree(&self) -> usize {
        self.rel.len()
    }

    pub fn algebra(&self) -> PresentedAlgebra {
        let p = self.modulus;
        let d = self.degree();
        assert!(d >= 1);
        // check f(aug_point) = 0
        let mut val = 1u64; // t^d term
        let mut pw = 1u64;
        let mut fa = 0u64;
        for &c in &self.rel {
            fa = (fa + c % p * pw) % p;
            pw = pw * self.aug_point % p;
        }
        val = val * pw % p;
        assert_eq!((fa + val) % p, 0, "augmentation point is not a root");
        // reduction of t^d
        let tred: Vec<u64> = self.rel.iter().map(|&c| (p - c % p) % p).collect();
        // basis 1..t^(d-1); structure constants by reduction
        let mut pows: Vec<Vec<u64>> = Vec::new(); // t^e for e in 0..2d-1
        let mut cur = vec![0u64; d];
        cur[0] = 1;
        for _ in 0..2 * d - 1 {
            pows.push(cur.clone());
            // multiply by t
            let mut next = vec![0u64; d];
            for (e, &c) in cur.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                if e + 1 < d {
                    next[e + 1] = (next[e + 1] + c) % p;
                } else {
                    for (k, &r) in tred.iter().enumerate() {
                        next[k] = (next[k] + c * r) % p;
                    }
                }
            }
            cur = next;
        }
        let mut structure = vec![0u64; d * d * d];
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    structure[(i * d + j) * d + k] = pows[i + j][k];
                }
            }
        }
        let mut aug = vec![0u64; d];
        let mut pw = 1u64;
        for a in aug.iter_mut() {
            *a = pw;
            pw = pw * self.aug_point % p;
        }
        // weights: only meaningful when the relation is weight-homogeneous
        let weights: Vec<i64> = (0..d).map(|i| i as i64 * self.weight_of_t).collect();
        PresentedAlgebra {
            modulus: p,
            basis: (0..d)
                .map(|i| if i == 0 { "1".into() } else { format!("t^{i}") })
                .collect(),
            weights,
            structure,
            augmentation: Some(aug),
        }
    }

    /// `f'(t)` as an element of `k[t]/(f)`.
    pub fn derivative(&self) -> Vec<u64> {
        let p = self.modulus;
        let d = self.degree();
        let mut out = vec![0u64; d];
        for (e, &c) in self.rel.iter().enumerate() {
            if e >= 1 {
                out[e - 1] = (out[e - 1] + e as u64 % p * (c % p)) % p;
            }
        }
        // + d · t^(d-1)
        out[d - 1] = (out[d - 1] + d as u64 % p) % p;
        out
    }
}

/// The two-term hypersurface cotangent complex
/// `(f)/(f²) → R·dt` with connecting map multiplication by `f'(t)`.
#[derive(Debug, Clone)]
pub struct TwoTermCotangent {
    pub algebra: PresentedAlgebra,
    /// weight of the conormal generator `f`
    pub source_weight: i64,
    /// weight of the generator `dt`
    pub target_weight: i64,
    /// `f'(t)` as an algebra element
    pub connecting: Vec<u64>,
}

impl TwoTermCotangent {
    /// `H^0` over the algebra: `Ω¹ = R/(f') dt`.
    pub fn h0_module_dim(&self) -> usize {
        self.algebra.dim() - self.algebra.regular_rep(&self.connecting).rank()
    }

    /// `H^(-1)` over the algebra: `Ann(f')`.
    pub fn hminus1_module_dim(&self) -> usize {
        self.algebra
            .regular_rep(&self.connecting)
            .kernel_basis()
            .cols()
    }

    /// Fiber along the augmentation: the coLie complex `k → k` with map
    /// `ε(f')`. Returns `(dim H^0, dim H^(-1))` with their weights.
    pub fn colie_fiber(&self) -> Result<CoLieFiber> {
        let e = self.algebra.eps(&self.connecting)?;
        if e == 0 {
            Ok(CoLieFiber {
                h0_dim: 1,
                h0_weight: self.target_weight,
                hminus1_dim: 1,
                hminus1_weight: self.source_weight,
            })
        } else {
            Ok(CoLieFiber {
                h0_dim: 0,
                h0_weight: self.target_weight,
                hminus1_dim: 0,
                hminus1_weight: self.source_weight,
            })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoLieFiber {
    pub h0_dim: usize,
    pub h0_weight: i64,
    pub hminus1_dim: usize,
    pub hminus1_weight: i64,
}

/// `L_{R/k}` for a hypersurface `R = k[t]/(f)`.
pub fn lci_cotangent(pres: &MonogenicPresentation) -> TwoTermCotangent {
    let algebra = pres.algebra();
    TwoTermCotangent {
        source_weight: pres.degree() as i64 * pres.weight_of_t,
        target_weight: pres.weight_of_t,
        connecting: pres.derivative(),
        algebra,
    }
}

/// `dlog(u) = u^(-1)·du` in the cokernel presentation `Ω¹ = R/(f')·dt`,
/// reduced to the deterministic canonical coset representative.
pub fn kaehler_and_dlog(pres: &MonogenicPresentation, u: &[u64]) -> Result<Vec<u64>> {
    let cot = lci_cotangent(pres);
    let a = &cot.algebra;
    let inv = a
        .try_inverse(u)
        .ok_or_else(|| Error::NotAUnit(format!("{u:?}")))?;
    // du = u'(t) dt by formal differentiation of the representative
    let p = pres.modulus;
    let mut du = vec![0u64; a.dim()];
    for (e, &c) in u.iter().enumerate() {
        if e >= 1 {
            du[e - 1] = (du[e - 1] + e as u64 % p * (c % p)) % p;
        }
    }
    let raw = a.multiply(&inv, &du);
    Ok(reduce_mod_image(a, &cot.connecting, &raw))
}

/// Canonical representative of `v` modulo the image of multiplication by `g`.
fn reduce_mod_image(a: &PresentedAlgebra, g: &[u64], v: &[u64]) -> Vec<u64> {
    let p = a.modulus;
    let img = a.regular_rep(g);
    let (r, pivots) = img.transpose().rref();
    // rows of r span the image; eliminate v against them
    let mut out: Vec<u64> = v.iter().map(|&c| c % p).collect();
    for (ri, &pc) in pivots.iter().enumerate() {
        let c = out[pc];
        if c != 0 {
            for j in 0..a.dim() {
                let e = r.get(ri, j);
                if e != 0 {
                    out[j] = (out[j] + (p - c) * e) % p;
                }
            }
        }
    }
    out
}
