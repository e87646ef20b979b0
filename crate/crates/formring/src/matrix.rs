//! Square matrices over the ring tower, the hyperbolic form ψ, and the
//! membership predicates for Bak's general quadratic group.
//!
//! A matrix of size 2n is viewed in blocks (a, b; c, d). Membership in GQ
//! is the exact identity σ*ψσ = ψ; the Λ-quadratic refinements add
//! diagonal form-parameter conditions and come in the four equivalent
//! shapes of the defining lemma. Condition 2 is evaluated with the
//! identity a*d + λc*b = I, the reading consistent with the other three
//! (the commonly printed c*d variant fails on known members).

use crate::form::FormRing;
use crate::ring::{Ring, RingValue};
use crate::Verdict;
use std::fmt;

#[derive(Clone, PartialEq, Eq)]
pub struct FormMatrix {
    ring: Ring,
    size: usize,
    entries: Vec<RingValue>,
}

impl fmt::Debug for FormMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FormMatrix {}x{} over {}", self.size, self.size, self.ring)?;
        for i in 0..self.size {
            let row: Vec<String> = (0..self.size).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl FormMatrix {
    pub fn zero(ring: &Ring, size: usize) -> FormMatrix {
        FormMatrix {
            ring: ring.clone(),
            size,
            entries: vec![ring.zero(); size * size],
        }
    }

    pub fn identity(ring: &Ring, size: usize) -> FormMatrix {
        let mut m = FormMatrix::zero(ring, size);
        for i in 0..size {
            m.set(i, i, ring.one());
        }
        m
    }

    pub fn from_rows(ring: &Ring, rows: Vec<Vec<RingValue>>) -> FormMatrix {
        let size = rows.len();
        let mut entries = Vec::with_capacity(size * size);
        for row in rows {
            assert_eq!(row.len(), size, "matrix must be square");
            for v in row {
                assert!(v.ring() == ring, "entry from the wrong ring");
                entries.push(v);
            }
        }
        FormMatrix {
            ring: ring.clone(),
            size,
            entries,
        }
    }

    /// Scalar matrix a·I.
    pub fn scalar(ring: &Ring, size: usize, a: &RingValue) -> FormMatrix {
        let mut m = FormMatrix::zero(ring, size);
        for i in 0..size {
            m.set(i, i, a.clone());
        }
        m
    }

    /// The single-entry matrix a·e_ij (zero elsewhere), 0-based indices.
    pub fn unit_entry(ring: &Ring, size: usize, i: usize, j: usize, a: &RingValue) -> FormMatrix {
        let mut m = FormMatrix::zero(ring, size);
        m.set(i, j, a.clone());
        m
    }

    /// Linear elementary matrix I + a·e_ij, i ≠ j, 0-based.
    pub fn elementary_linear(ring: &Ring, size: usize, i: usize, j: usize, a: &RingValue) -> FormMatrix {
        assert!(i != j, "linear elementary matrices need i != j");
        let mut m = FormMatrix::identity(ring, size);
        m.set(i, j, a.clone());
        m
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> &RingValue {
        &self.entries[i * self.size + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: RingValue) {
        assert!(v.ring() == &self.ring, "entry from the wrong ring");
        self.entries[i * self.size + j] = v;
    }

    pub fn add(&self, other: &FormMatrix) -> FormMatrix {
        assert_eq!(self.size, other.size);
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(x, y)| self.ring.add(x, y))
            .collect();
        FormMatrix {
            ring: self.ring.clone(),
            size: self.size,
            entries,
        }
    }

    pub fn sub(&self, other: &FormMatrix) -> FormMatrix {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> FormMatrix {
        FormMatrix {
            ring: self.ring.clone(),
            size: self.size,
            entries: self.entries.iter().map(|x| self.ring.neg(x)).collect(),
        }
    }

    pub fn mul(&self, other: &FormMatrix) -> FormMatrix {
        assert_eq!(self.size, other.size, "size mismatch in matrix product");
        let n = self.size;
        let r = &self.ring;
        let mut out = FormMatrix::zero(r, n);
        for i in 0..n {
            for k in 0..n {
                let aik = self.get(i, k);
                if r.is_zero(aik) {
                    continue;
                }
                for j in 0..n {
                    let t = r.mul(aik, other.get(k, j));
                    let cur = r.add(out.get(i, j), &t);
                    out.set(i, j, cur);
                }
            }
        }
        out
    }

    pub fn scalar_mul(&self, a: &RingValue) -> FormMatrix {
        FormMatrix {
            ring: self.ring.clone(),
            size: self.size,
            entries: self.entries.iter().map(|x| self.ring.mul(a, x)).collect(),
        }
    }

    pub fn transpose(&self) -> FormMatrix {
        let n = self.size;
        let mut out = FormMatrix::zero(&self.ring, n);
        for i in 0..n {
            for j in 0..n {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    /// σ* = conjugate transpose: (σ*)_ij = conj(σ_ji).
    pub fn star(&self) -> FormMatrix {
        let n = self.size;
        let mut out = FormMatrix::zero(&self.ring, n);
        for i in 0..n {
            for j in 0..n {
                out.set(j, i, self.ring.involve(self.get(i, j)));
            }
        }
        out
    }

    /// Entrywise map into the same ring.
    pub fn map(&self, f: impl Fn(&RingValue) -> RingValue) -> FormMatrix {
        let entries: Vec<RingValue> = self.entries.iter().map(f).collect();
        for v in &entries {
            assert!(v.ring() == &self.ring, "map produced a foreign value");
        }
        FormMatrix {
            ring: self.ring.clone(),
            size: self.size,
            entries,
        }
    }

    /// Entrywise map into another ring.
    pub fn map_into(&self, ring: &Ring, f: impl Fn(&RingValue) -> RingValue) -> FormMatrix {
        let entries: Vec<RingValue> = self.entries.iter().map(f).collect();
        for v in &entries {
            assert!(v.ring() == ring, "map produced a value outside the target ring");
        }
        FormMatrix {
            ring: ring.clone(),
            size: self.size,
            entries,
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == FormMatrix::identity(&self.ring, self.size)
    }

    pub fn is_zero_matrix(&self) -> bool {
        self.entries.iter().all(|v| self.ring.is_zero(v))
    }

    /// Blocks (a, b; c, d) of an even-size matrix.
    pub fn blocks(&self) -> (FormMatrix, FormMatrix, FormMatrix, FormMatrix) {
        assert!(self.size % 2 == 0, "block access requires even size");
        let n = self.size / 2;
        let pick = |r0: usize, c0: usize| {
            let mut m = FormMatrix::zero(&self.ring, n);
            for i in 0..n {
                for j in 0..n {
                    m.set(i, j, self.get(r0 + i, c0 + j).clone());
                }
            }
            m
        };
        (pick(0, 0), pick(0, n), pick(n, 0), pick(n, n))
    }

    pub fn from_blocks(a: &FormMatrix, b: &FormMatrix, c: &FormMatrix, d: &FormMatrix) -> FormMatrix {
        let n = a.size;
        assert!(b.size == n && c.size == n && d.size == n, "ragged blocks");
        let ring = a.ring.clone();
        let mut m = FormMatrix::zero(&ring, 2 * n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, a.get(i, j).clone());
                m.set(i, n + j, b.get(i, j).clone());
                m.set(n + i, j, c.get(i, j).clone());
                m.set(n + i, n + j, d.get(i, j).clone());
            }
        }
        m
    }

    /// The embedding GQ(2n) → GQ(2n+2) that borders each block with a
    /// fresh hyperbolic pair.
    pub fn stabilize(&self) -> FormMatrix {
        let (a, b, c, d) = self.blocks();
        let n = self.size / 2;
        let r = &self.ring;
        let grow = |m: &FormMatrix, diag: bool| {
            let mut g = FormMatrix::zero(r, n + 1);
            for i in 0..n {
                for j in 0..n {
                    g.set(i, j, m.get(i, j).clone());
                }
            }
            if diag {
                g.set(n, n, r.one());
            }
            g
        };
        FormMatrix::from_blocks(&grow(&a, true), &grow(&b, false), &grow(&c, false), &grow(&d, true))
    }

    /// Orthogonal sum: block-diagonal on each of the four blocks.
    pub fn perp(&self, other: &FormMatrix) -> FormMatrix {
        let (a1, b1, c1, d1) = self.blocks();
        let (a2, b2, c2, d2) = other.blocks();
        let join = |x: &FormMatrix, y: &FormMatrix| {
            let n = x.size + y.size;
            let mut m = FormMatrix::zero(&self.ring, n);
            for i in 0..x.size {
                for j in 0..x.size {
                    m.set(i, j, x.get(i, j).clone());
                }
            }
            for i in 0..y.size {
                for j in 0..y.size {
                    m.set(x.size + i, x.size + j, y.get(i, j).clone());
                }
            }
            m
        };
        FormMatrix::from_blocks(&join(&a1, &a2), &join(&b1, &b2), &join(&c1, &c2), &join(&d1, &d2))
    }

    /// N nilpotent as a matrix, tested by repeated squaring up to the size.
    pub fn is_nilpotent(&self) -> bool {
        let mut p = self.clone();
        let mut steps = 0usize;
        loop {
            if p.is_zero_matrix() {
                return true;
            }
            if (1usize << steps) > self.size {
                return false;
            }
            p = p.mul(&p);
            steps += 1;
        }
    }

    /// Inverse of I + N for nilpotent N by the finite geometric series.
    pub fn unipotent_inverse(&self) -> Option<FormMatrix> {
        let n = self.sub(&FormMatrix::identity(&self.ring, self.size));
        if !n.is_nilpotent() {
            return None;
        }
        let mut sum = FormMatrix::identity(&self.ring, self.size);
        let mut term = n.neg();
        while !term.is_zero_matrix() {
            sum = sum.add(&term);
            term = term.mul(&n.neg());
        }
        Some(sum)
    }

    /// Determinant by dynamic programming over column subsets. Exact over
    /// every (commutative) ring of the tower.
    pub fn det(&self) -> RingValue {
        let n = self.size;
        let r = &self.ring;
        if n == 0 {
            return r.one();
        }
        // dp[mask] = signed sum over ways to fill the first popcount(mask)
        // rows using column set mask.
        let mut dp = vec![r.zero(); 1 << n];
        dp[0] = r.one();
        for mask in 0usize..(1 << n) {
            if r.is_zero(&dp[mask]) {
                continue;
            }
            let row = mask.count_ones() as usize;
            if row == n {
                continue;
            }
            for j in 0..n {
                if mask & (1 << j) != 0 {
                    continue;
                }
                // New inversions: chosen columns above j, i.e. row - below.
                let below = (mask & ((1 << j) - 1)).count_ones() as usize;
                let term = r.mul(&dp[mask], self.get(row, j));
                let term = if (row + below) % 2 == 1 { r.neg(&term) } else { term };
                let nm = mask | (1 << j);
                dp[nm] = r.add(&dp[nm], &term);
            }
        }
        dp[(1 << n) - 1].clone()
    }

    /// General exact inverse: unipotent geometric series when applicable,
    /// otherwise adjugate over the commutative tower (det must be a unit).
    pub fn inverse(&self) -> Option<FormMatrix> {
        if let Some(inv) = self.unipotent_inverse() {
            return Some(inv);
        }
        let n = self.size;
        let r = &self.ring;
        let det = self.det();
        let det_inv = r.try_invert(&det)?;
        let mut adj = FormMatrix::zero(r, n);
        for i in 0..n {
            for j in 0..n {
                // Cofactor expansion: adj_ji = (−1)^{i+j} det(minor_ij).
                let mut minor = FormMatrix::zero(r, n - 1);
                for (mi, si) in (0..n).filter(|&x| x != i).enumerate() {
                    for (mj, sj) in (0..n).filter(|&x| x != j).enumerate() {
                        minor.set(mi, mj, self.get(si, sj).clone());
                    }
                }
                let mut c = minor.det();
                if (i + j) % 2 == 1 {
                    c = r.neg(&c);
                }
                adj.set(j, i, r.mul(&c, &det_inv));
            }
        }
        // Exactness check: zero divisors cannot slip through this.
        let prod = self.mul(&adj);
        if prod.is_identity() {
            Some(adj)
        } else {
            None
        }
    }
}

// ---------------------------------------------------------------------------
// the form and its groups

/// ψ_n = (0, I_n; λI_n, 0).
pub fn psi(fr: &FormRing, n: usize) -> FormMatrix {
    let r = fr.ring();
    let mut m = FormMatrix::zero(r, 2 * n);
    for i in 0..n {
        m.set(i, n + i, r.one());
        m.set(n + i, i, fr.lambda().clone());
    }
    m
}

/// σ*ψσ = ψ, the membership equation of the general quadratic group.
pub fn is_gq(fr: &FormRing, m: &FormMatrix) -> bool {
    if m.size() % 2 != 0 {
        return false;
    }
    let n = m.size() / 2;
    let p = psi(fr, n);
    m.star().mul(&p).mul(m) == p
}

/// The inverse of σ ∈ GQ: σ⁻¹ = λ̄·ψσ*ψ, verified before returning.
pub fn gq_inverse(fr: &FormRing, m: &FormMatrix) -> Option<FormMatrix> {
    if m.size() % 2 != 0 {
        return None;
    }
    let n = m.size() / 2;
    let p = psi(fr, n);
    let cand = p.mul(&m.star()).mul(&p).scalar_mul(fr.lambda_bar());
    if m.mul(&cand).is_identity() && cand.mul(m).is_identity() {
        Some(cand)
    } else {
        None
    }
}

/// β = −λβ* (kind Λ) or β = −λ̄β* (kind Λ̄), with diagonal entries in the
/// corresponding parameter.
pub fn is_hermitian(fr: &FormRing, m: &FormMatrix, bar: bool) -> Verdict {
    let factor = if bar { fr.lambda_bar() } else { fr.lambda() };
    if *m != m.star().scalar_mul(factor).neg() {
        return Verdict::False;
    }
    let mut verdict = Verdict::True;
    for i in 0..m.size() {
        let d = m.get(i, i);
        let v = if bar { fr.in_form_bar(d) } else { fr.in_form(d) };
        match v {
            Verdict::True => {}
            Verdict::False => return Verdict::False,
            Verdict::Unknown => verdict = Verdict::Unknown,
        }
    }
    verdict
}

/// The four equivalent membership conditions for the Λ-quadratic group.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadCondition {
    C1,
    C2,
    C3,
    C4,
}

fn diag_in_form(fr: &FormRing, m: &FormMatrix, bar: bool) -> Verdict {
    let mut verdict = Verdict::True;
    for i in 0..m.size() {
        let v = if bar {
            fr.in_form_bar(m.get(i, i))
        } else {
            fr.in_form(m.get(i, i))
        };
        match v {
            Verdict::True => {}
            Verdict::False => return Verdict::False,
            Verdict::Unknown => verdict = Verdict::Unknown,
        }
    }
    verdict
}

fn verdict_and(a: Verdict, b: Verdict) -> Verdict {
    match (a, b) {
        (Verdict::False, _) | (_, Verdict::False) => Verdict::False,
        (Verdict::Unknown, _) | (_, Verdict::Unknown) => Verdict::Unknown,
        _ => Verdict::True,
    }
}

/// Evaluates one of the four defining conditions of the Λ-quadratic group.
pub fn lambda_quadratic_condition(fr: &FormRing, m: &FormMatrix, cond: QuadCondition) -> Verdict {
    if m.size() % 2 != 0 {
        return Verdict::False;
    }
    let n = m.size() / 2;
    let (a, b, c, d) = m.blocks();
    let ident = FormMatrix::identity(fr.ring(), n);
    match cond {
        QuadCondition::C1 => {
            if !is_gq(fr, m) {
                return Verdict::False;
            }
            verdict_and(
                diag_in_form(fr, &a.star().mul(&c), false),
                diag_in_form(fr, &b.star().mul(&d), false),
            )
        }
        QuadCondition::C2 => {
            // a*d + λ c*b = I together with Λ-Hermitian a*c and b*d.
            let eq = a
                .star()
                .mul(&d)
                .add(&c.star().mul(&b).scalar_mul(fr.lambda()));
            if eq != ident {
                return Verdict::False;
            }
            verdict_and(
                is_hermitian(fr, &a.star().mul(&c), false),
                is_hermitian(fr, &b.star().mul(&d), false),
            )
        }
        QuadCondition::C3 => {
            if !is_gq(fr, m) {
                return Verdict::False;
            }
            verdict_and(
                diag_in_form(fr, &a.mul(&b.star()), false),
                diag_in_form(fr, &c.mul(&d.star()), false),
            )
        }
        QuadCondition::C4 => {
            let eq = a
                .mul(&d.star())
                .add(&b.mul(&c.star()).scalar_mul(fr.lambda()));
            if eq != ident {
                return Verdict::False;
            }
            verdict_and(
                is_hermitian(fr, &a.mul(&b.star()), false),
                is_hermitian(fr, &c.mul(&d.star()), false),
            )
        }
    }
}

/// All four conditions disagreeing on a matrix is a hard diagnostic; the
/// variant reading of condition 2 is part of the message.
#[derive(Debug, thiserror::Error)]
#[error(
    "lambda-quadratic conditions disagree: c1={c1}, c2={c2}, c3={c3}, c4={c4} \
     (condition 2 evaluated with the a*d + lambda*c*b = I reading)"
)]
pub struct QuadDisagreement {
    pub c1: Verdict,
    pub c2: Verdict,
    pub c3: Verdict,
    pub c4: Verdict,
}

/// Evaluates all four conditions and insists they agree.
pub fn lambda_quadratic_all(fr: &FormRing, m: &FormMatrix) -> Result<Verdict, QuadDisagreement> {
    let c1 = lambda_quadratic_condition(fr, m, QuadCondition::C1);
    let c2 = lambda_quadratic_condition(fr, m, QuadCondition::C2);
    let c3 = lambda_quadratic_condition(fr, m, QuadCondition::C3);
    let c4 = lambda_quadratic_condition(fr, m, QuadCondition::C4);
    let decided: Vec<Verdict> = [c1, c2, c3, c4]
        .into_iter()
        .filter(|v| *v != Verdict::Unknown)
        .collect();
    if decided.windows(2).any(|w| w[0] != w[1]) {
        return Err(QuadDisagreement { c1, c2, c3, c4 });
    }
    Ok(if decided.is_empty() {
        Verdict::Unknown
    } else if decided.len() < 4 {
        // Some condition was unknown; stay honest.
        Verdict::Unknown
    } else {
        decided[0]
    })
}

/// H(α) = (α, 0; 0, (α*)⁻¹), the hyperbolic embedding of an invertible α.
pub fn hyperbolic_h(fr: &FormRing, alpha: &FormMatrix) -> Option<FormMatrix> {
    let inv_star = alpha.star().inverse()?;
    let n = alpha.size();
    let zero = FormMatrix::zero(fr.ring(), n);
    Some(FormMatrix::from_blocks(alpha, &zero, &zero, &inv_star))
}

/// T₁₂(β) = (I, β; 0, I); β must be Λ̄-Hermitian unless validation is skipped.
pub fn t12(fr: &FormRing, beta: &FormMatrix, validate: bool) -> Option<FormMatrix> {
    if validate && is_hermitian(fr, beta, true) == Verdict::False {
        return None;
    }
    let n = beta.size();
    let ident = FormMatrix::identity(fr.ring(), n);
    let zero = FormMatrix::zero(fr.ring(), n);
    Some(FormMatrix::from_blocks(&ident, beta, &zero, &ident))
}

/// T₂₁(γ) = (I, 0; γ, I); γ must be Λ-Hermitian unless validation is skipped.
pub fn t21(fr: &FormRing, gamma: &FormMatrix, validate: bool) -> Option<FormMatrix> {
    if validate && is_hermitian(fr, gamma, false) == Verdict::False {
        return None;
    }
    let n = gamma.size();
    let ident = FormMatrix::identity(fr.ring(), n);
    let zero = FormMatrix::zero(fr.ring(), n);
    Some(FormMatrix::from_blocks(&ident, &zero, gamma, &ident))
}

// ---------------------------------------------------------------------------
// vectors and the transvection form

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Vector {
    ring: Ring,
    entries: Vec<RingValue>,
}

impl Vector {
    pub fn new(ring: &Ring, entries: Vec<RingValue>) -> Vector {
        for v in &entries {
            assert!(v.ring() == ring, "entry from the wrong ring");
        }
        Vector {
            ring: ring.clone(),
            entries,
        }
    }

    pub fn zero(ring: &Ring, len: usize) -> Vector {
        Vector {
            ring: ring.clone(),
            entries: vec![ring.zero(); len],
        }
    }

    /// Standard basis column e_k (0-based).
    pub fn basis(ring: &Ring, len: usize, k: usize) -> Vector {
        let mut v = Vector::zero(ring, len);
        v.entries[k] = ring.one();
        v
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize) -> &RingValue {
        &self.entries[i]
    }

    pub fn set(&mut self, i: usize, v: RingValue) {
        assert!(v.ring() == &self.ring, "entry from the wrong ring");
        self.entries[i] = v;
    }

    pub fn entries(&self) -> &[RingValue] {
        &self.entries
    }

    pub fn add(&self, other: &Vector) -> Vector {
        assert_eq!(self.len(), other.len());
        Vector {
            ring: self.ring.clone(),
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(x, y)| self.ring.add(x, y))
                .collect(),
        }
    }

    /// Matrix action m·v.
    pub fn apply(&self, m: &FormMatrix) -> Vector {
        assert_eq!(m.size(), self.len());
        let r = &self.ring;
        let entries = (0..self.len())
            .map(|i| {
                let mut acc = r.zero();
                for j in 0..self.len() {
                    acc = r.add(&acc, &r.mul(m.get(i, j), &self.entries[j]));
                }
                acc
            })
            .collect();
        Vector {
            ring: self.ring.clone(),
            entries,
        }
    }
}

/// ṽ = v̄ᵗψ as an entry row: ṽ_j = λ·conj(v_{n+j}) for j ≤ n and
/// ṽ_{n+j} = conj(v_j).
pub fn tilde(fr: &FormRing, v: &Vector) -> Vec<RingValue> {
    let len = v.len();
    assert!(len % 2 == 0, "tilde needs an even length");
    let n = len / 2;
    let r = fr.ring();
    let mut out = vec![r.zero(); len];
    for j in 0..n {
        out[j] = r.mul(fr.lambda(), &r.involve(v.get(n + j)));
        out[n + j] = r.involve(v.get(j));
    }
    out
}

/// ⟨v, w⟩ = ṽ·w.
pub fn inner(fr: &FormRing, v: &Vector, w: &Vector) -> RingValue {
    assert_eq!(v.len(), w.len());
    let r = fr.ring();
    let tv = tilde(fr, v);
    let mut acc = r.zero();
    for (t, x) in tv.iter().zip(w.entries()) {
        acc = r.add(&acc, &r.mul(t, x));
    }
    acc
}

/// M(v, w) = v·w̃ − λ̄·w̄·ṽ.
pub fn m_form(fr: &FormRing, v: &Vector, w: &Vector) -> FormMatrix {
    assert_eq!(v.len(), w.len());
    let len = v.len();
    let r = fr.ring();
    let tw = tilde(fr, w);
    let tv = tilde(fr, v);
    let mut out = FormMatrix::zero(r, len);
    for i in 0..len {
        for j in 0..len {
            let first = r.mul(v.get(i), &tw[j]);
            let second = r.mul(
                &r.mul(fr.lambda_bar(), &r.involve(w.get(i))),
                &tv[j],
            );
            out.set(i, j, r.sub(&first, &second));
        }
    }
    out
}

/// GL_n(R) → GQ¹(2n, H(R), Λ_max): α ↦ H(A) with A_ij = (α_ij, (α⁻¹)_ji).
/// The second components make A* = A⁻¹, so the image is block diagonal
/// (A, 0; 0, A).
pub fn hyperbolic_embed_linear(
    hyp_fr: &FormRing,
    alpha: &FormMatrix,
    alpha_inv: Option<&FormMatrix>,
) -> Option<FormMatrix> {
    let hring = hyp_fr.ring();
    assert!(hring.is_hyperbolic(), "target ring must be hyperbolic");
    let base = hring.base().unwrap();
    assert!(alpha.ring() == base, "matrix must live over the base ring");
    let inv = match alpha_inv {
        Some(i) => i.clone(),
        None => alpha.inverse()?,
    };
    if !alpha.mul(&inv).is_identity() {
        return None;
    }
    let n = alpha.size();
    let mut a = FormMatrix::zero(hring, n);
    for i in 0..n {
        for j in 0..n {
            a.set(i, j, hring.pair(alpha.get(i, j), inv.get(j, i)));
        }
    }
    let zero = FormMatrix::zero(hring, n);
    Some(FormMatrix::from_blocks(&a, &zero, &zero, &a))
}
