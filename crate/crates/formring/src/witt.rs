//! Truncated-polynomial Witt machinery, torsion step checks, Higman
//! representatives, and the unipotent reduction driver.
//!
//! Conventions: computations live in R_t = R[X]/(X^{t+1}), realized by the
//! truncated ring descriptors. A series is handled through the polynomial
//! P with f = 1 + X·P. Ghost components follow the logarithmic-derivative
//! convention g_n = [X^n] X·f'/f, cross-checked against the divisor-sum
//! formula over the Witt coordinates.

use thiserror::Error;

use crate::form::{FormParameterSpec, FormError, FormRing};
use crate::graded::{graded_components, matrix_plus_eval, GradedError};
use crate::matrix::{hyperbolic_h, is_gq, is_hermitian, lambda_quadratic_all, FormMatrix};
use crate::ring::{Ring, RingDescriptor, RingValue};
use crate::words::{
    elementary_word_search, reduce_triangular, Certificate, CertifiedClaim, GeneratorWord,
    SearchBudget, WordError,
};
use crate::Verdict;

#[derive(Debug, Error)]
pub enum WittError {
    #[error("expected a truncated polynomial ring, got {0}")]
    NotTruncated(String),
    #[error("bad factor step: {0}")]
    BadStep(String),
    #[error("{0} is not invertible in the coefficient ring")]
    NotInvertible(String),
    #[error("torsion lemma counterexample: {0}")]
    Counterexample(String),
    #[error("nilpotency bound exceeded: {0}")]
    Nilpotency(String),
    #[error("operation not available here: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Graded(#[from] GradedError),
    #[error(transparent)]
    Form(#[from] FormError),
}

fn truncation_of(rt: &Ring) -> Result<u32, WittError> {
    rt.truncation_bound()
        .ok_or_else(|| WittError::NotTruncated(rt.to_string()))
}

/// Formal derivative with respect to the outer polynomial variable.
pub fn derivative(rt: &Ring, v: &RingValue) -> RingValue {
    let base = rt.base().expect("polynomial ring has a base");
    let coeffs = rt.coefficients(v);
    if coeffs.len() <= 1 {
        return rt.zero();
    }
    let scaled: Vec<RingValue> = coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| base.mul(c, &base.from_i64(k as i64)))
        .collect();
    rt.from_coefficients(&scaled)
}

/// Inverse of a series with unit constant term and nilpotent tail, by
/// geometric expansion inside the truncated ring.
fn series_invert(rt: &Ring, f: &RingValue) -> Result<RingValue, WittError> {
    let t = truncation_of(rt)?;
    let c0 = rt.coefficient(f, 0);
    let base = rt.base().unwrap();
    let c0_inv = base
        .try_invert(&c0)
        .ok_or_else(|| WittError::NotInvertible(c0.to_string()))?;
    let c0_inv = rt.constant(&c0_inv);
    // f = c0 (1 + u) with u of positive degree; invert the unit part.
    let u = rt.sub(&rt.mul(f, &c0_inv), &rt.one());
    let mut acc = rt.one();
    let mut term = rt.one();
    for _ in 0..t {
        term = rt.neg(&rt.mul(&term, &u));
        acc = rt.add(&acc, &term);
    }
    Ok(rt.mul(&acc, &c0_inv))
}

/// Splits 1 + X^r·P as (1 + X^r·P(0))·(1 + X^{r+1}·Q) inside R_t,
/// returning (P(0), Q). The identity is exact and deg(Q) < t − r.
pub fn witt_factor_step(
    rt: &Ring,
    p: &RingValue,
    r: u32,
) -> Result<(RingValue, RingValue), WittError> {
    let t = truncation_of(rt)?;
    if r < 1 {
        return Err(WittError::BadStep("step index must be at least 1".into()));
    }
    if r > t {
        return Err(WittError::BadStep(format!(
            "step index {r} exceeds the truncation bound {t}"
        )));
    }
    let base = rt.base().unwrap();
    let x_r = rt.pow(&rt.variable(), r);
    let head_coeff = rt.coefficient(p, 0);
    let head = rt.add(&rt.one(), &rt.mul(&x_r, &rt.constant(&head_coeff)));
    let lhs = rt.add(&rt.one(), &rt.mul(&x_r, p));

    let rest = rt.mul(&series_invert(rt, &head)?, &lhs);
    // rest = 1 + X^{r+1} Q; shift the tail down.
    let coeffs = rt.coefficients(&rest);
    for (k, c) in coeffs.iter().enumerate().take((r as usize) + 1) {
        let expected = if k == 0 { base.one() } else { base.zero() };
        if *c != expected {
            return Err(WittError::BadStep(format!(
                "factor step left an unexpected coefficient at degree {k}"
            )));
        }
    }
    let q_coeffs: Vec<RingValue> = coeffs.iter().skip(r as usize + 1).cloned().collect();
    let q = rt.from_coefficients(&q_coeffs);

    // deg(Q) < t - r by construction; verify the identity exactly.
    let x_r1 = rt.pow(&rt.variable(), r + 1);
    let rhs = rt.mul(&head, &rt.add(&rt.one(), &rt.mul(&x_r1, &q)));
    if rhs != lhs {
        return Err(WittError::BadStep("factor identity failed to close".into()));
    }
    Ok((head_coeff, q))
}

/// Witt coordinates (a_1, …, a_t) of a series 1 + X·P over R_t.
#[derive(Debug, Clone, PartialEq)]
pub struct WittCoordinates {
    ring: Ring,
    coords: Vec<RingValue>,
}

impl WittCoordinates {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    /// Coordinates as elements of the coefficient ring.
    pub fn coords(&self) -> &[RingValue] {
        &self.coords
    }
}

/// Iterated factor steps: writes 1 + X·P = Π_{i=1}^{t} (1 + a_i X^i) in R_t.
pub fn witt_decompose(rt: &Ring, p: &RingValue) -> Result<WittCoordinates, WittError> {
    let t = truncation_of(rt)?;
    let mut coords = Vec::with_capacity(t as usize);
    let mut current = p.clone();
    for r in 1..=t {
        let (head, q) = witt_factor_step(rt, &current, r)?;
        coords.push(head);
        current = q;
    }
    Ok(WittCoordinates {
        ring: rt.clone(),
        coords,
    })
}

/// The product Π (1 + a_i X^i) back in R_t.
pub fn witt_recompose(coords: &WittCoordinates) -> RingValue {
    let rt = &coords.ring;
    let mut acc = rt.one();
    for (i, a) in coords.coords.iter().enumerate() {
        let x_i = rt.pow(&rt.variable(), (i + 1) as u32);
        acc = rt.mul(&acc, &rt.add(&rt.one(), &rt.mul(&x_i, &rt.constant(a))));
    }
    acc
}

/// Ghost components g_1..g_t of f = 1 + X·P, with g_n the coefficient of
/// X^n in X·f'/f computed in R_t.
pub fn ghost_vector(rt: &Ring, p: &RingValue) -> Result<Vec<RingValue>, WittError> {
    let t = truncation_of(rt)?;
    let f = rt.add(&rt.one(), &rt.mul(&rt.variable(), p));
    let numer = rt.mul(&rt.variable(), &derivative(rt, &f));
    let g = rt.mul(&numer, &series_invert(rt, &f)?);
    Ok((1..=t as usize).map(|n| rt.coefficient(&g, n)).collect())
}

/// Ghost components from Witt coordinates by the divisor-sum formula
/// g_n = Σ_{d | n} (−1)^{n/d − 1} · d · a_d^{n/d}.
pub fn ghost_from_coordinates(coords: &WittCoordinates) -> Vec<RingValue> {
    let base = coords.ring.base().expect("truncated ring has a base");
    let t = coords.coords.len();
    (1..=t)
        .map(|n| {
            let mut g = base.zero();
            for d in 1..=n {
                if n % d != 0 {
                    continue;
                }
                let e = (n / d) as u32;
                let mut term = base.mul(
                    &base.from_i64(d as i64),
                    &base.pow(&coords.coords[d - 1], e),
                );
                if e % 2 == 0 {
                    term = base.neg(&term);
                }
                g = base.add(&g, &term);
            }
            g
        })
        .collect()
}

/// The torsion step: if (1 + X^r·P)^{k^r} = 1 holds in R_t with k
/// invertible, then P(0) must vanish and the series starts one degree
/// higher. Returns None when the hypothesis fails, and the shifted Q when
/// it holds; a nonzero P(0) under the hypothesis is a counterexample and
/// is reported as an error.
pub fn torsion_step_check(
    rt: &Ring,
    p: &RingValue,
    r: u32,
    k: u32,
) -> Result<Option<RingValue>, WittError> {
    truncation_of(rt)?;
    let base = rt.base().unwrap();
    if base.try_invert(&base.from_i64(k as i64)).is_none() {
        return Err(WittError::NotInvertible(k.to_string()));
    }
    let x_r = rt.pow(&rt.variable(), r);
    let u = rt.add(&rt.one(), &rt.mul(&x_r, p));
    let exponent = k
        .checked_pow(r)
        .ok_or_else(|| WittError::BadStep("power overflow".into()))?;
    if !rt.is_one(&rt.pow(&u, exponent)) {
        return Ok(None);
    }
    let head = rt.coefficient(p, 0);
    if !base.is_zero(&head) {
        return Err(WittError::Counterexample(format!(
            "(1 + X^{r}·P)^{exponent} = 1 with P(0) = {head} ≠ 0 over {rt}"
        )));
    }
    let (_, q) = witt_factor_step(rt, p, r)?;
    Ok(Some(q))
}

/// Exhaustive scan outcome of `torsion_step_check` over a finite ring.
#[derive(Debug, Clone, Copy)]
pub struct TorsionScan {
    /// Number of (P, r) pairs examined.
    pub checked: u64,
    /// Pairs where the torsion hypothesis held (and the conclusion was
    /// verified; any violation aborts the scan as an error).
    pub satisfied: u64,
}

/// Runs `torsion_step_check` over every P in R_t and every step index.
pub fn torsion_scan(rt: &Ring, k: u32) -> Result<TorsionScan, WittError> {
    let t = truncation_of(rt)?;
    let elements = rt
        .elements()
        .ok_or_else(|| WittError::Unsupported("coefficient ring is not enumerable".into()))?;
    let mut checked = 0;
    let mut satisfied = 0;
    for p in &elements {
        for r in 1..=t {
            checked += 1;
            if torsion_step_check(rt, p, r, k)?.is_some() {
                satisfied += 1;
            }
        }
    }
    Ok(TorsionScan { checked, satisfied })
}

/// Reading of the Hermitian conditions in a Higman representative.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HermitianMode {
    /// b conjugate-parameter Hermitian, c parameter Hermitian (matching
    /// the T12/T21 block positions).
    A,
    /// Both b and c parameter Hermitian.
    B,
}

impl std::fmt::Display for HermitianMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            HermitianMode::A => write!(f, "A"),
            HermitianMode::B => write!(f, "B"),
        }
    }
}

/// A linearised representative [a; b, c]_n with r×r blocks over the
/// coefficient form ring.
#[derive(Debug, Clone)]
pub struct HigmanRep {
    fr: FormRing,
    pub a: FormMatrix,
    pub b: FormMatrix,
    pub c: FormMatrix,
    pub n: u32,
}

impl HigmanRep {
    pub fn form_ring(&self) -> &FormRing {
        &self.fr
    }

    pub fn block_size(&self) -> usize {
        self.a.size()
    }
}

pub fn higman_make(
    fr: &FormRing,
    a: &FormMatrix,
    b: &FormMatrix,
    c: &FormMatrix,
    n: u32,
) -> Result<HigmanRep, WittError> {
    let r = a.size();
    if b.size() != r || c.size() != r {
        return Err(WittError::Unsupported(
            "blocks must be square of equal size".into(),
        ));
    }
    if n == 0 {
        return Err(WittError::Unsupported("degree must be positive".into()));
    }
    for m in [a, b, c] {
        if m.ring() != fr.ring() {
            return Err(WittError::Unsupported(
                "blocks must live over the coefficient ring".into(),
            ));
        }
    }
    Ok(HigmanRep {
        fr: fr.clone(),
        a: a.clone(),
        b: b.clone(),
        c: c.clone(),
        n,
    })
}

impl HigmanRep {
    /// The polynomial form ring (R[X], Λ[X]) the representative lives over.
    pub fn polynomial_form_ring(&self) -> Result<FormRing, WittError> {
        let r = self.fr.ring();
        let desc = RingDescriptor::Poly {
            base: Box::new(r.descriptor().clone()),
            var: "X".into(),
            fixes_var: true,
        };
        let rx = Ring::new(&desc).map_err(|e| WittError::Unsupported(e.to_string()))?;
        let lambda = rx.constant(self.fr.lambda());
        let spec = match self.fr.form() {
            FormParameterSpec::Min => FormParameterSpec::Min,
            FormParameterSpec::Max => FormParameterSpec::Max,
            FormParameterSpec::Generated(gens) => {
                FormParameterSpec::Generated(gens.iter().map(|g| rx.constant(g)).collect())
            }
        };
        Ok(FormRing::new(rx, lambda, spec)?)
    }

    /// The assembled 2r×2r matrix
    /// (I − aX, bX; −cX^n, I + a*X + ⋯ + (a*)^n X^n) over R[X].
    pub fn assemble(&self) -> Result<(FormRing, FormMatrix), WittError> {
        let fr_x = self.polynomial_form_ring()?;
        let rx = fr_x.ring();
        let r = self.block_size();
        let x = rx.variable();

        let embed_scaled = |m: &FormMatrix, power: u32| -> FormMatrix {
            let mut out = FormMatrix::zero(rx, r);
            let x_pow = rx.pow(&x, power);
            for i in 0..r {
                for j in 0..r {
                    out.set(i, j, rx.mul(&rx.constant(m.get(i, j)), &x_pow));
                }
            }
            out
        };

        let upper_left = FormMatrix::identity(rx, r).sub(&embed_scaled(&self.a, 1));
        let upper_right = embed_scaled(&self.b, 1);
        let lower_left = embed_scaled(&self.c, self.n).neg();
        let a_star = self.a.star();
        let mut lower_right = FormMatrix::identity(rx, r);
        let mut a_power = FormMatrix::identity(self.fr.ring(), r);
        for k in 1..=self.n {
            a_power = a_power.mul(&a_star);
            lower_right = lower_right.add(&embed_scaled(&a_power, k));
        }
        let assembled = FormMatrix::from_blocks(&upper_left, &upper_right, &lower_left, &lower_right);
        Ok((fr_x, assembled))
    }
}

/// Clause-by-clause validation report for a Higman representative.
#[derive(Debug, Clone)]
pub struct HigmanReport {
    pub mode: HermitianMode,
    /// Named clause verdicts, in order of the three conditions.
    pub clauses: Vec<(String, Verdict)>,
    /// Quadratic-group membership of the assembled matrix over (R[X], Λ[X]).
    pub quadratic: Verdict,
}

impl HigmanReport {
    pub fn overall(&self) -> Verdict {
        let mut v = self.quadratic;
        for (_, c) in &self.clauses {
            v = match (v, *c) {
                (Verdict::False, _) | (_, Verdict::False) => Verdict::False,
                (Verdict::Unknown, _) | (_, Verdict::Unknown) => Verdict::Unknown,
                _ => Verdict::True,
            };
        }
        v
    }

    /// Clauses that failed outright.
    pub fn violations(&self) -> Vec<&str> {
        self.clauses
            .iter()
            .filter(|(_, v)| *v == Verdict::False)
            .map(|(name, _)| name.as_str())
            .collect()
    }
}

fn verdict_eq(lhs: &FormMatrix, rhs: &FormMatrix) -> Verdict {
    Verdict::from_bool(lhs == rhs)
}

/// Checks conditions (1)–(3) under the chosen Hermitian reading and the
/// quadratic membership of the assembled matrix.
pub fn higman_validate(rep: &HigmanRep, mode: HermitianMode) -> Result<HigmanReport, WittError> {
    let fr = &rep.fr;
    let b_bar = match mode {
        HermitianMode::A => true,
        HermitianMode::B => false,
    };
    let a_star = rep.a.star();
    let mut clauses = Vec::new();

    clauses.push((
        "b hermitian".to_string(),
        is_hermitian(fr, &rep.b, b_bar),
    ));
    clauses.push((
        "ab hermitian".to_string(),
        is_hermitian(fr, &rep.a.mul(&rep.b), b_bar),
    ));
    clauses.push((
        "ab = b a*".to_string(),
        verdict_eq(&rep.a.mul(&rep.b), &rep.b.mul(&a_star)),
    ));

    clauses.push(("c hermitian".to_string(), is_hermitian(fr, &rep.c, false)));
    clauses.push((
        "ca hermitian".to_string(),
        is_hermitian(fr, &rep.c.mul(&rep.a), false),
    ));
    clauses.push((
        "ca = a* c".to_string(),
        verdict_eq(&rep.c.mul(&rep.a), &a_star.mul(&rep.c)),
    ));

    let mut a_n1 = FormMatrix::identity(fr.ring(), rep.block_size());
    let mut a_star_n1 = a_n1.clone();
    for _ in 0..=rep.n {
        a_n1 = a_n1.mul(&rep.a);
        a_star_n1 = a_star_n1.mul(&a_star);
    }
    clauses.push((
        "bc = a^(n+1)".to_string(),
        verdict_eq(&rep.b.mul(&rep.c), &a_n1),
    ));
    clauses.push((
        "cb = (a*)^(n+1)".to_string(),
        verdict_eq(&rep.c.mul(&rep.b), &a_star_n1),
    ));

    let (fr_x, assembled) = rep.assemble()?;
    let quadratic = lambda_quadratic_all(&fr_x, &assembled)
        .map_err(|e| WittError::Unsupported(e.to_string()))?;

    Ok(HigmanReport {
        mode,
        clauses,
        quadratic,
    })
}

/// Reduces the assembled representative to its hyperbolic part H(I − aX)
/// by block transvections, with an exact certificate. The upper-left
/// block is carried through unchanged.
pub fn hyperbolic_reduce(rep: &HigmanRep) -> Result<(Certificate, FormMatrix), WittError> {
    if !rep.a.is_nilpotent() {
        return Err(WittError::Nilpotency(
            "upper-left coefficient block is not nilpotent".into(),
        ));
    }
    let (fr_x, assembled) = rep.assemble()?;
    let rx = fr_x.ring();
    let r = rep.block_size();

    let (cert, h_part) = reduce_triangular(&fr_x, &assembled)?;

    // The hyperbolic part must be H(I − aX) with the block untouched.
    let x = rx.variable();
    let mut expected_corner = FormMatrix::identity(rx, r);
    for i in 0..r {
        for j in 0..r {
            let shifted = rx.mul(&rx.constant(rep.a.get(i, j)), &x);
            expected_corner.set(i, j, rx.sub(expected_corner.get(i, j), &shifted));
        }
    }
    let (ul, _, _, _) = h_part.blocks();
    if ul != expected_corner {
        return Err(WittError::Unsupported(
            "reduction disturbed the upper-left block".into(),
        ));
    }
    let expected = hyperbolic_h(&fr_x, &expected_corner).ok_or_else(|| {
        WittError::Nilpotency("I − aX is not invertible within the nilpotency bound".into())
    })?;
    if h_part != expected {
        return Err(WittError::Unsupported(
            "reduced matrix is not the hyperbolic of I − aX".into(),
        ));
    }
    Ok((cert, h_part))
}

/// Outcome of the graded unipotent reduction driver.
#[derive(Debug)]
pub struct UnipotentReport {
    pub verdict: Verdict,
    /// Homogenized peel factors over R[X], in order.
    pub factors: Vec<FormMatrix>,
    /// The same factors evaluated at X = 1, over R.
    pub at_one: Vec<FormMatrix>,
    /// Elementary words found for the evaluated factors; parallel to
    /// `at_one`, None where the bounded search gave out.
    pub words: Vec<Option<GeneratorWord>>,
    /// The degree-zero target I + N₀.
    pub target: FormMatrix,
    /// Full verifying certificate: (I+N)·eval(word) = I+N₀. Present only
    /// when every factor produced a word.
    pub certificate: Option<Certificate>,
}

fn poly_at_one(rx: &Ring, v: &RingValue) -> RingValue {
    let base = rx.base().expect("polynomial ring has a base");
    rx.coefficients(v)
        .iter()
        .fold(base.zero(), |acc, c| base.add(&acc, c))
}

/// Certificate-producing skeleton of the unipotent reduction: homogenizes
/// I + N over R[X], peels Witt-style factors I + A_i X^i exactly, puts
/// X = 1, and searches an elementary word for every factor. The verdict
/// is True with a verifying certificate, or Unknown with the completed
/// prefix; class equality is never decided negatively.
pub fn unipotent_reduce_graded(
    fr: &FormRing,
    n_mat: &FormMatrix,
    k: u32,
    budget: &SearchBudget,
) -> Result<UnipotentReport, WittError> {
    let r = fr.ring();
    let size = n_mat.size();
    if size % 2 != 0 || size < 6 {
        return Err(WittError::Unsupported(
            "driver needs a matrix of even size at least 6".into(),
        ));
    }
    let n = size / 2;
    let base = r
        .base()
        .ok_or_else(|| WittError::Unsupported("coefficient ring carries no grading".into()))?;
    if base.try_invert(&base.from_i64(k as i64)).is_none() {
        return Err(WittError::NotInvertible(k.to_string()));
    }
    if !n_mat.is_nilpotent() {
        return Err(WittError::Nilpotency("input matrix is not nilpotent".into()));
    }
    let unipotent = FormMatrix::identity(r, size).add(n_mat);
    if !is_gq(fr, &unipotent) {
        return Err(WittError::Unsupported(
            "I + N is outside the quadratic group".into(),
        ));
    }
    let target = matrix_plus_eval(r, &unipotent, &r.zero())?;

    // Homogenize: degree-d components gain X^d.
    let desc = RingDescriptor::Poly {
        base: Box::new(r.descriptor().clone()),
        var: "X".into(),
        fixes_var: true,
    };
    let rx = Ring::new(&desc).map_err(|e| WittError::Unsupported(e.to_string()))?;
    let mut theta = FormMatrix::zero(&rx, size);
    for i in 0..size {
        for j in 0..size {
            let mut e = rx.zero();
            for (d, comp) in graded_components(r, unipotent.get(i, j)).iter().enumerate() {
                let term = rx.mul(&rx.constant(comp), &rx.pow(&rx.variable(), d as u32));
                e = rx.add(&e, &term);
            }
            theta.set(i, j, e);
        }
    }

    // Peel: theta = (I + N0 X^0) * prod (I + A_i X^i), exactly over R[X].
    let mut head = FormMatrix::zero(&rx, size);
    for i in 0..size {
        for j in 0..size {
            head.set(i, j, rx.constant(target.get(i, j)));
        }
    }
    let head_inv = head.inverse().ok_or_else(|| {
        WittError::Nilpotency("degree-zero part is not invertible".into())
    })?;
    let mut current = head_inv.mul(&theta);
    let mut factors = Vec::new();
    let mut step = 1u32;
    const MAX_STEPS: u32 = 24;
    while !current.is_identity() {
        if step > MAX_STEPS {
            break;
        }
        let mut factor = FormMatrix::identity(&rx, size);
        let mut nontrivial = false;
        for i in 0..size {
            for j in 0..size {
                let c = rx.coefficient(current.get(i, j), step as usize);
                if !r.is_zero(&c) {
                    nontrivial = true;
                    let term = rx.mul(&rx.constant(&c), &rx.pow(&rx.variable(), step));
                    factor.set(i, j, rx.add(factor.get(i, j), &term));
                }
            }
        }
        if nontrivial {
            let factor_inv = factor.inverse().ok_or_else(|| {
                WittError::Nilpotency("peel factor is not invertible".into())
            })?;
            current = factor_inv.mul(&current);
            factors.push(factor);
        }
        step += 1;
    }

    if !current.is_identity() {
        return Ok(UnipotentReport {
            verdict: Verdict::Unknown,
            factors,
            at_one: Vec::new(),
            words: Vec::new(),
            target,
            certificate: None,
        });
    }

    // X = 1 recombines the grading; search a word per factor.
    let mut at_one = Vec::with_capacity(factors.len());
    let mut words: Vec<Option<GeneratorWord>> = Vec::with_capacity(factors.len());
    let mut complete = true;
    for f in &factors {
        let mut g = FormMatrix::zero(r, size);
        for i in 0..size {
            for j in 0..size {
                g.set(i, j, poly_at_one(&rx, f.get(i, j)));
            }
        }
        let w = match elementary_word_search(fr, n, &g, budget) {
            Ok(w) => Some(w),
            Err(WordError::SearchExhausted) | Err(WordError::NonMember(_)) => None,
            Err(e) => return Err(e.into()),
        };
        if w.is_none() {
            complete = false;
        }
        at_one.push(g);
        words.push(w);
    }

    let certificate = if complete {
        let mut product_word = GeneratorWord::new(fr, n);
        for w in words.iter().flatten() {
            product_word = product_word.concat(w);
        }
        let cert = Certificate {
            claim: CertifiedClaim::ReducesTo,
            subject: unipotent.clone(),
            word: product_word.inverse(),
            target: target.clone(),
        };
        if !cert.verify() {
            return Err(WittError::Unsupported(
                "assembled reduction word failed verification".into(),
            ));
        }
        Some(cert)
    } else {
        None
    };

    Ok(UnipotentReport {
        verdict: if certificate.is_some() {
            Verdict::True
        } else {
            Verdict::Unknown
        },
        factors,
        at_one,
        words,
        target,
        certificate,
    })
}
