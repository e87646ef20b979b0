//! Elementary generators of the quadratic group, words over them, and
//! certificate-producing factorizations.
//!
//! Generator families, with rho(i) = n + i and 1-based indices:
//!   QE  i j a   (i != j)  I + a e_ij - conj(a) e_{rho(j) rho(i)}
//!   QR  i j a   (i != j)  I + a e_{i rho(j)} - conj(lambda) conj(a) e_{j rho(i)}
//!   QR  i i a             I + a e_{i rho(i)},  a = -conj(lambda) conj(a), a in conj(Lambda)
//!   QL  i j a   (i != j)  I + a e_{rho(i) j} - lambda conj(a) e_{rho(j) i}
//!   QL  i i a             I + a e_{rho(i) i}, a = -lambda conj(a), a in Lambda
//!   HYP_E i j r (i != j)  H(I + r e_ij), the hyperbolic of a linear transvection
//!   T12 beta / T21 gamma  block transvections with Hermitian arguments
//!
//! Every family splits additively in its argument, so inverses are
//! argument negations and words normalize cleanly under grading.

use crate::form::FormRing;
use crate::matrix::{
    gq_inverse, hyperbolic_h, inner, is_gq, is_hermitian, m_form, t12, t21, FormMatrix, Vector,
};
use crate::ring::RingValue;
use crate::Verdict;
use std::collections::BTreeSet;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum SymbolKind {
    QE,
    QR,
    QL,
    HypE,
    T12,
    T21,
}

impl fmt::Display for SymbolKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SymbolKind::QE => "QE",
            SymbolKind::QR => "QR",
            SymbolKind::QL => "QL",
            SymbolKind::HypE => "HYP_E",
            SymbolKind::T12 => "T12",
            SymbolKind::T21 => "T21",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SymbolArg {
    Scalar(RingValue),
    Matrix(FormMatrix),
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorSymbol {
    pub kind: SymbolKind,
    pub i: usize,
    pub j: usize,
    pub arg: SymbolArg,
    pub inverted: bool,
}

impl GeneratorSymbol {
    pub fn scalar_arg(&self) -> Option<&RingValue> {
        match &self.arg {
            SymbolArg::Scalar(v) => Some(v),
            SymbolArg::Matrix(_) => None,
        }
    }

    pub fn matrix_arg(&self) -> Option<&FormMatrix> {
        match &self.arg {
            SymbolArg::Matrix(m) => Some(m),
            SymbolArg::Scalar(_) => None,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum WordError {
    #[error("generator index ({i},{j}) out of range for n={n}")]
    IndexOutOfRange { i: usize, j: usize, n: usize },
    #[error("off-diagonal indices required for {0}")]
    DiagonalForbidden(SymbolKind),
    #[error("diagonal generator constraint violated: {0}")]
    DiagonalConstraint(String),
    #[error("block transvection argument is not Hermitian of the required kind")]
    HermitianConstraint,
    #[error("argument lives in the wrong ring")]
    RingMismatch,
    #[error("inner product <v,w> = {0} is nonzero")]
    InnerProductNonzero(String),
    #[error("matrix is not representable by the ansatz: {0}")]
    NotRepresentable(String),
    #[error("input is not a group member: {0}")]
    NonMember(String),
    #[error("bounded search exhausted without finding a word")]
    SearchExhausted,
}

/// A word of elementary generators over a fixed form ring and size.
#[derive(Debug, Clone)]
pub struct GeneratorWord {
    fr: FormRing,
    n: usize,
    symbols: Vec<GeneratorSymbol>,
}

/// Builds and validates a single generator symbol.
pub fn gen(
    fr: &FormRing,
    n: usize,
    kind: SymbolKind,
    i: usize,
    j: usize,
    arg: SymbolArg,
) -> Result<GeneratorSymbol, WordError> {
    let r = fr.ring();
    match (&kind, &arg) {
        (SymbolKind::T12 | SymbolKind::T21, SymbolArg::Matrix(m)) => {
            if m.ring() != r || m.size() != n {
                return Err(WordError::RingMismatch);
            }
            let bar = kind == SymbolKind::T12;
            if is_hermitian(fr, m, bar) == Verdict::False {
                return Err(WordError::HermitianConstraint);
            }
            return Ok(GeneratorSymbol {
                kind,
                i: 0,
                j: 0,
                arg,
                inverted: false,
            });
        }
        (SymbolKind::T12 | SymbolKind::T21, SymbolArg::Scalar(_)) => {
            return Err(WordError::RingMismatch)
        }
        (_, SymbolArg::Matrix(_)) => return Err(WordError::RingMismatch),
        (_, SymbolArg::Scalar(a)) => {
            if a.ring() != r {
                return Err(WordError::RingMismatch);
            }
        }
    }
    if i < 1 || i > n || j < 1 || j > n {
        return Err(WordError::IndexOutOfRange { i, j, n });
    }
    let a = match &arg {
        SymbolArg::Scalar(a) => a.clone(),
        SymbolArg::Matrix(_) => unreachable!(),
    };
    if i == j {
        match kind {
            SymbolKind::QE | SymbolKind::HypE => {
                return Err(WordError::DiagonalForbidden(kind));
            }
            SymbolKind::QR => {
                let fixed = a == r.neg(&r.mul(fr.lambda_bar(), &r.involve(&a)));
                if !fixed {
                    return Err(WordError::DiagonalConstraint(format!(
                        "QR {i} {i} needs a = -conj(lambda)*conj(a); got {a}"
                    )));
                }
                if fr.in_form_bar(&a) == Verdict::False {
                    return Err(WordError::DiagonalConstraint(format!(
                        "QR {i} {i} argument {a} is outside the conjugated form parameter"
                    )));
                }
            }
            SymbolKind::QL => {
                let fixed = a == r.neg(&r.mul(fr.lambda(), &r.involve(&a)));
                if !fixed {
                    return Err(WordError::DiagonalConstraint(format!(
                        "QL {i} {i} needs a = -lambda*conj(a); got {a}"
                    )));
                }
                if fr.in_form(&a) == Verdict::False {
                    return Err(WordError::DiagonalConstraint(format!(
                        "QL {i} {i} argument {a} is outside the form parameter"
                    )));
                }
            }
            SymbolKind::T12 | SymbolKind::T21 => unreachable!(),
        }
    }
    Ok(GeneratorSymbol {
        kind,
        i,
        j,
        arg,
        inverted: false,
    })
}

/// The matrix of a single symbol.
pub fn symbol_matrix(fr: &FormRing, n: usize, sym: &GeneratorSymbol) -> FormMatrix {
    let r = fr.ring();
    let neg_if = |v: &RingValue| {
        if sym.inverted {
            r.neg(v)
        } else {
            v.clone()
        }
    };
    match (&sym.kind, &sym.arg) {
        (SymbolKind::T12, SymbolArg::Matrix(beta)) => {
            let b = if sym.inverted { beta.neg() } else { beta.clone() };
            t12(fr, &b, false).unwrap()
        }
        (SymbolKind::T21, SymbolArg::Matrix(gamma)) => {
            let g = if sym.inverted { gamma.neg() } else { gamma.clone() };
            t21(fr, &g, false).unwrap()
        }
        (kind, SymbolArg::Scalar(raw)) => {
            let a = neg_if(raw);
            let abar = r.involve(&a);
            let (i, j) = (sym.i - 1, sym.j - 1);
            let mut m = FormMatrix::identity(r, 2 * n);
            match kind {
                SymbolKind::QE | SymbolKind::HypE => {
                    m.set(i, j, r.add(m.get(i, j), &a));
                    let e = r.neg(&abar);
                    m.set(n + j, n + i, r.add(m.get(n + j, n + i), &e));
                }
                SymbolKind::QR => {
                    m.set(i, n + j, r.add(m.get(i, n + j), &a));
                    if i != j {
                        let e = r.neg(&r.mul(fr.lambda_bar(), &abar));
                        m.set(j, n + i, r.add(m.get(j, n + i), &e));
                    }
                }
                SymbolKind::QL => {
                    m.set(n + i, j, r.add(m.get(n + i, j), &a));
                    if i != j {
                        let e = r.neg(&r.mul(fr.lambda(), &abar));
                        m.set(n + j, i, r.add(m.get(n + j, i), &e));
                    }
                }
                _ => unreachable!(),
            }
            m
        }
        _ => unreachable!("validated at construction"),
    }
}

impl GeneratorWord {
    pub fn new(fr: &FormRing, n: usize) -> GeneratorWord {
        GeneratorWord {
            fr: fr.clone(),
            n,
            symbols: Vec::new(),
        }
    }

    pub fn from_symbols(
        fr: &FormRing,
        n: usize,
        symbols: Vec<GeneratorSymbol>,
    ) -> GeneratorWord {
        GeneratorWord {
            fr: fr.clone(),
            n,
            symbols,
        }
    }

    pub fn form_ring(&self) -> &FormRing {
        &self.fr
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn symbols(&self) -> &[GeneratorSymbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn push(
        &mut self,
        kind: SymbolKind,
        i: usize,
        j: usize,
        arg: SymbolArg,
    ) -> Result<(), WordError> {
        let sym = gen(&self.fr, self.n, kind, i, j, arg)?;
        self.symbols.push(sym);
        Ok(())
    }

    pub fn push_symbol(&mut self, sym: GeneratorSymbol) {
        self.symbols.push(sym);
    }

    pub fn concat(&self, other: &GeneratorWord) -> GeneratorWord {
        let mut symbols = self.symbols.clone();
        symbols.extend(other.symbols.iter().cloned());
        GeneratorWord {
            fr: self.fr.clone(),
            n: self.n,
            symbols,
        }
    }

    /// The inverse word: symbols reversed with flipped inversion flags.
    pub fn inverse(&self) -> GeneratorWord {
        let symbols = self
            .symbols
            .iter()
            .rev()
            .map(|s| {
                let mut s = s.clone();
                s.inverted = !s.inverted;
                s
            })
            .collect();
        GeneratorWord {
            fr: self.fr.clone(),
            n: self.n,
            symbols,
        }
    }

    pub fn eval(&self) -> FormMatrix {
        let mut acc = FormMatrix::identity(self.fr.ring(), 2 * self.n);
        for sym in &self.symbols {
            acc = acc.mul(&symbol_matrix(&self.fr, self.n, sym));
        }
        acc
    }
}

/// [x, y] = x y x^{-1} y^{-1} as a word.
pub fn commutator(x: &GeneratorWord, y: &GeneratorWord) -> GeneratorWord {
    x.concat(y).concat(&x.inverse()).concat(&y.inverse())
}

// ---------------------------------------------------------------------------
// certificates

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertifiedClaim {
    /// eval(word) equals the subject matrix.
    Factors,
    /// subject * eval(word) equals the target matrix.
    ReducesTo,
}

impl fmt::Display for CertifiedClaim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CertifiedClaim::Factors => "factors",
            CertifiedClaim::ReducesTo => "reduces-to",
        })
    }
}

/// A self-contained, re-checkable statement: a subject matrix, a word,
/// and the claimed exact relation between them.
#[derive(Debug, Clone)]
pub struct Certificate {
    pub claim: CertifiedClaim,
    pub subject: FormMatrix,
    pub word: GeneratorWord,
    pub target: FormMatrix,
}

impl Certificate {
    pub fn verify(&self) -> bool {
        let value = self.word.eval();
        match self.claim {
            CertifiedClaim::Factors => value == self.subject && self.subject == self.target,
            CertifiedClaim::ReducesTo => self.subject.mul(&value) == self.target,
        }
    }
}

// ---------------------------------------------------------------------------
// transvection factorization

/// Factors I + M(v, w) for v = eval(eps) * e1 and <v, w> = 0 into an
/// explicit word eps * (QE/QR row ansatz) * (solved diagonal) * eps^{-1},
/// verified by exact re-evaluation.
pub fn factor_transvection(
    eps: &GeneratorWord,
    w: &Vector,
) -> Result<Certificate, WordError> {
    let fr = eps.form_ring().clone();
    let n = eps.n();
    let r = fr.ring().clone();
    if n < 3 {
        return Err(WordError::NotRepresentable(format!(
            "transvection factorization needs n >= 3, got n = {n}"
        )));
    }
    let e = eps.eval();
    let v = Vector::basis(&r, 2 * n, 0).apply(&e);
    let ip = inner(&fr, &v, w);
    if !r.is_zero(&ip) {
        return Err(WordError::InnerProductNonzero(ip.to_string()));
    }
    let e_inv = gq_inverse(&fr, &e)
        .ok_or_else(|| WordError::NonMember("conjugator word does not evaluate into GQ".into()))?;
    let w1 = w.apply(&e_inv);
    let target1 = FormMatrix::identity(&r, 2 * n).add(&m_form(
        &fr,
        &Vector::basis(&r, 2 * n, 0),
        &w1,
    ));

    // Row ansatz: QE 1 j fills (1, j), QR 1 j fills (1, n+j); the corner
    // (1, n+1) is left to a solved diagonal QR.
    let mut core = GeneratorWord::new(&fr, n);
    for j in 2..=n {
        let a = target1.get(0, j - 1).clone();
        if !r.is_zero(&a) {
            core.push(SymbolKind::QE, 1, j, SymbolArg::Scalar(a))?;
        }
    }
    for j in 2..=n {
        let b = target1.get(0, n + j - 1).clone();
        if !r.is_zero(&b) {
            core.push(SymbolKind::QR, 1, j, SymbolArg::Scalar(b))?;
        }
    }
    let partial = core.eval();
    let partial_inv = gq_inverse(&fr, &partial)
        .ok_or_else(|| WordError::NonMember("ansatz prefix left GQ".into()))?;
    let residual = partial_inv.mul(&target1);
    // The residual must be exactly I + c e_{1, rho(1)}.
    let ident = FormMatrix::identity(&r, 2 * n);
    for row in 0..2 * n {
        for col in 0..2 * n {
            if (row, col) == (0, n) {
                continue;
            }
            if residual.get(row, col) != ident.get(row, col) {
                return Err(WordError::NotRepresentable(format!(
                    "residual entry ({}, {}) = {} obstructs the corner solve",
                    row + 1,
                    col + 1,
                    residual.get(row, col)
                )));
            }
        }
    }
    let c = residual.get(0, n).clone();
    if !r.is_zero(&c) {
        let fixed = c == r.neg(&r.mul(fr.lambda_bar(), &r.involve(&c)));
        if !fixed || fr.in_form_bar(&c) == Verdict::False {
            return Err(WordError::DiagonalConstraint(format!(
                "corner argument {c} admits no diagonal QR symbol"
            )));
        }
        core.push(SymbolKind::QR, 1, 1, SymbolArg::Scalar(c))?;
    }

    let word = eps.concat(&core).concat(&eps.inverse());
    let subject = FormMatrix::identity(&r, 2 * n).add(&m_form(&fr, &v, w));
    let cert = Certificate {
        claim: CertifiedClaim::Factors,
        subject: subject.clone(),
        word,
        target: subject,
    };
    if !cert.verify() {
        return Err(WordError::NotRepresentable(
            "assembled word fails exact re-evaluation".into(),
        ));
    }
    Ok(cert)
}

// ---------------------------------------------------------------------------
// triangular reduction

/// Reduces a block-triangular member (or one with an invertible upper-left
/// block) to its hyperbolic part: returns (certificate, H(alpha)) with
/// subject * eval(word) = H(alpha) exactly.
pub fn reduce_triangular(
    fr: &FormRing,
    a_mat: &FormMatrix,
) -> Result<(Certificate, FormMatrix), WordError> {
    if a_mat.size() % 2 != 0 {
        return Err(WordError::NonMember("odd matrix size".into()));
    }
    let n = a_mat.size() / 2;
    let (a, b, _, _) = a_mat.blocks();
    let mut word = GeneratorWord::new(fr, n);
    let mut current = a_mat.clone();

    let push_t12 = |word: &mut GeneratorWord, beta: FormMatrix| -> Result<(), WordError> {
        if is_hermitian(fr, &beta, true) == Verdict::False {
            return Err(WordError::NonMember(
                "upper block ratio is not Hermitian of the required kind".into(),
            ));
        }
        word.push_symbol(GeneratorSymbol {
            kind: SymbolKind::T12,
            i: 0,
            j: 0,
            arg: SymbolArg::Matrix(beta),
            inverted: false,
        });
        Ok(())
    };
    let push_t21 = |word: &mut GeneratorWord, gamma: FormMatrix| -> Result<(), WordError> {
        if is_hermitian(fr, &gamma, false) == Verdict::False {
            return Err(WordError::NonMember(
                "lower block ratio is not Hermitian of the required kind".into(),
            ));
        }
        word.push_symbol(GeneratorSymbol {
            kind: SymbolKind::T21,
            i: 0,
            j: 0,
            arg: SymbolArg::Matrix(gamma),
            inverted: false,
        });
        Ok(())
    };

    if !b.is_zero_matrix() {
        let a_inv = a.inverse().ok_or_else(|| {
            WordError::NonMember("upper-left block is not invertible".into())
        })?;
        let beta = a_inv.mul(&b);
        push_t12(&mut word, beta.neg())?;
        current = current.mul(&symbol_matrix(fr, n, word.symbols().last().unwrap()));
    }
    let (_, b2, c2, d2) = current.blocks();
    if !b2.is_zero_matrix() {
        return Err(WordError::NotRepresentable(
            "upper-right block survived the T12 step".into(),
        ));
    }
    if !c2.is_zero_matrix() {
        let d_inv = d2.inverse().ok_or_else(|| {
            WordError::NonMember("lower-right block is not invertible".into())
        })?;
        let gamma = d_inv.mul(&c2);
        push_t21(&mut word, gamma.neg())?;
        current = current.mul(&symbol_matrix(fr, n, word.symbols().last().unwrap()));
    }
    let (alpha, b3, c3, _) = current.blocks();
    if !b3.is_zero_matrix() || !c3.is_zero_matrix() {
        return Err(WordError::NotRepresentable(
            "off-diagonal blocks survived the reduction".into(),
        ));
    }
    let hyperbolic = hyperbolic_h(fr, &alpha)
        .ok_or_else(|| WordError::NonMember("diagonal block is not invertible".into()))?;
    if hyperbolic != current {
        // The lower-right block must be the inverse conjugate transpose
        // of the upper-left one; anything else flags a non-member input.
        return Err(WordError::NonMember(
            "lower-right block is not the inverse conjugate transpose of the upper-left".into(),
        ));
    }
    let cert = Certificate {
        claim: CertifiedClaim::ReducesTo,
        subject: a_mat.clone(),
        word,
        target: hyperbolic.clone(),
    };
    if !cert.verify() {
        return Err(WordError::NotRepresentable(
            "reduction word fails exact re-evaluation".into(),
        ));
    }
    Ok((cert, hyperbolic))
}

// ---------------------------------------------------------------------------
// graded normalization

/// Splits a value into (degree-zero part, strictly positive part) with
/// respect to the outermost polynomial grading of the ring tower.
pub fn graded_split(v: &RingValue) -> (RingValue, RingValue) {
    let r = v.ring().clone();
    if r.is_poly() || r.is_truncated() {
        let coeffs = r.coefficients(v);
        let zero_part = coeffs
            .first()
            .map(|c| r.constant(c))
            .unwrap_or_else(|| r.zero());
        let plus = r.sub(v, &zero_part);
        return (zero_part, plus);
    }
    if r.is_hyperbolic() {
        let (p, q) = r.pair_parts(v);
        let (p0, pp) = graded_split(&p);
        let (q0, qp) = graded_split(&q);
        return (r.pair(&p0, &q0), r.pair(&pp, &qp));
    }
    if r.localized_at().is_some() {
        // The denominator is degree zero, so splitting the numerator
        // splits the fraction.
        let (num, pow) = r.fraction_parts(v);
        let (n0, np) = graded_split(&num);
        return (r.fraction(&n0, pow), r.fraction(&np, pow));
    }
    (v.clone(), r.zero())
}

fn split_symbol_arg(sym: &GeneratorSymbol) -> (SymbolArg, SymbolArg, bool) {
    match &sym.arg {
        SymbolArg::Scalar(a) => {
            let (z, p) = graded_split(a);
            let plus_zero = a.ring().is_zero(&p);
            (SymbolArg::Scalar(z), SymbolArg::Scalar(p), plus_zero)
        }
        SymbolArg::Matrix(m) => {
            let z = m.map(|v| graded_split(v).0);
            let p = m.sub(&z);
            let plus_zero = p.is_zero_matrix();
            (SymbolArg::Matrix(z), SymbolArg::Matrix(p), plus_zero)
        }
    }
}

fn arg_is_zero(fr: &FormRing, arg: &SymbolArg) -> bool {
    match arg {
        SymbolArg::Scalar(a) => fr.ring().is_zero(a),
        SymbolArg::Matrix(m) => m.is_zero_matrix(),
    }
}

/// Rewrites a word over a graded ring as (conjugate part, residual):
/// each symbol splits as eta(a) = eta(a0) * eta(a+), the positive pieces
/// are conjugated to the front by the running degree-zero prefix, and the
/// residual is the degree-zero word. The concatenation re-evaluates to
/// the original word exactly.
pub fn graded_normalize(word: &GeneratorWord) -> (GeneratorWord, GeneratorWord) {
    let fr = word.form_ring().clone();
    let n = word.n();

    // Resolve inversion flags first: every family negates its argument.
    let plain: Vec<GeneratorSymbol> = word
        .symbols()
        .iter()
        .map(|s| {
            if !s.inverted {
                return s.clone();
            }
            let mut s = s.clone();
            s.inverted = false;
            s.arg = match &s.arg {
                SymbolArg::Scalar(a) => SymbolArg::Scalar(a.ring().neg(a)),
                SymbolArg::Matrix(m) => SymbolArg::Matrix(m.neg()),
            };
            s
        })
        .collect();

    let mut conjugate = GeneratorWord::new(&fr, n);
    let mut residual = GeneratorWord::new(&fr, n);
    let mut prefix: Vec<GeneratorSymbol> = Vec::new();

    for sym in &plain {
        let (zero_arg, plus_arg, plus_is_zero) = split_symbol_arg(sym);
        let zero_sym = GeneratorSymbol {
            arg: zero_arg,
            ..sym.clone()
        };
        let plus_sym = GeneratorSymbol {
            arg: plus_arg,
            ..sym.clone()
        };
        // eta(a) = eta(a0) * eta(a+): the conjugator includes this
        // symbol's degree-zero half.
        if !arg_is_zero(&fr, &zero_sym.arg) {
            prefix.push(zero_sym.clone());
            residual.push_symbol(zero_sym);
        }
        if !plus_is_zero {
            for p in &prefix {
                conjugate.push_symbol(p.clone());
            }
            conjugate.push_symbol(plus_sym);
            for p in prefix.iter().rev() {
                let mut inv = p.clone();
                inv.inverted = !inv.inverted;
                conjugate.push_symbol(inv);
            }
        }
    }
    (conjugate, residual)
}

// ---------------------------------------------------------------------------
// bounded word search

/// Limits for the greedy iterative-deepening search.
#[derive(Debug, Clone, Copy)]
pub struct SearchBudget {
    pub max_len: usize,
    pub max_degree: u32,
    pub branch_width: usize,
}

impl Default for SearchBudget {
    fn default() -> SearchBudget {
        SearchBudget {
            max_len: 6,
            max_degree: 3,
            branch_width: 8,
        }
    }
}

fn off_identity_count(m: &FormMatrix) -> usize {
    let r = m.ring();
    let mut count = 0;
    for i in 0..m.size() {
        for j in 0..m.size() {
            let want_one = i == j;
            let e = m.get(i, j);
            let ok = if want_one { r.is_one(e) } else { r.is_zero(e) };
            if !ok {
                count += 1;
            }
        }
    }
    count
}

/// Generator symbols that can account for a nonzero off-identity entry at
/// (row, col) of the residual, 0-based over a 2n frame.
fn entry_moves(
    fr: &FormRing,
    n: usize,
    row: usize,
    col: usize,
    value: &RingValue,
) -> Vec<GeneratorSymbol> {
    let r = fr.ring();
    let mut out = Vec::new();
    let mut push = |kind: SymbolKind, i: usize, j: usize, a: RingValue| {
        if let Ok(sym) = gen(fr, n, kind, i, j, SymbolArg::Scalar(a)) {
            out.push(sym);
        }
    };
    if row < n && col < n && row != col {
        push(SymbolKind::QE, row + 1, col + 1, value.clone());
    } else if row < n && col >= n {
        let j = col - n;
        push(SymbolKind::QR, row + 1, j + 1, value.clone());
        if row != j {
            // The mirror slot of the transposed symbol.
            let a = r.neg(&r.mul(fr.lambda_bar(), &r.involve(value)));
            push(SymbolKind::QR, j + 1, row + 1, a);
        }
    } else if row >= n && col < n {
        let i = row - n;
        push(SymbolKind::QL, i + 1, col + 1, value.clone());
        if i != col {
            let a = r.neg(&r.mul(fr.lambda(), &r.involve(value)));
            push(SymbolKind::QL, col + 1, i + 1, a);
        }
    } else if row >= n && col >= n && row != col {
        let (i, j) = (row - n, col - n);
        // The lower-right slot of QE j i carries -conj(a).
        push(SymbolKind::QE, j + 1, i + 1, r.neg(&r.involve(value)));
    }
    out
}

fn search_step(
    fr: &FormRing,
    n: usize,
    residual: &FormMatrix,
    depth: usize,
    budget: &SearchBudget,
    acc: &mut Vec<GeneratorSymbol>,
) -> bool {
    if residual.is_identity() {
        return true;
    }
    if depth == 0 {
        return false;
    }
    // Candidate moves from every off-identity entry, deduplicated and
    // deterministically ordered, best-scoring first.
    let mut seen: BTreeSet<String> = BTreeSet::new();
    let mut scored: Vec<(usize, String, GeneratorSymbol)> = Vec::new();
    let ident = FormMatrix::identity(fr.ring(), 2 * n);
    for row in 0..2 * n {
        for col in 0..2 * n {
            let e = residual.get(row, col);
            if e == ident.get(row, col) {
                continue;
            }
            if row == col {
                continue;
            }
            for sym in entry_moves(fr, n, row, col, e) {
                let key = format!(
                    "{} {} {} {}",
                    sym.kind,
                    sym.i,
                    sym.j,
                    sym.scalar_arg().unwrap()
                );
                if !seen.insert(key.clone()) {
                    continue;
                }
                let mut inv = sym.clone();
                inv.inverted = true;
                let next = symbol_matrix(fr, n, &inv).mul(residual);
                let score = off_identity_count(&next);
                if score < off_identity_count(residual) + 2 {
                    scored.push((score, key, sym));
                }
            }
        }
    }
    scored.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
    for (_, _, sym) in scored.into_iter().take(budget.branch_width) {
        let mut inv = sym.clone();
        inv.inverted = true;
        let next = symbol_matrix(fr, n, &inv).mul(residual);
        acc.push(sym);
        if search_step(fr, n, &next, depth - 1, budget, acc) {
            return true;
        }
        acc.pop();
    }
    false
}

/// Bounded search for a word of scalar generators evaluating exactly to
/// the target. Exhaustion is reported as an error, never as a wrong word.
pub fn elementary_word_search(
    fr: &FormRing,
    n: usize,
    target: &FormMatrix,
    budget: &SearchBudget,
) -> Result<GeneratorWord, WordError> {
    if target.size() != 2 * n {
        return Err(WordError::RingMismatch);
    }
    if !is_gq(fr, target) {
        return Err(WordError::NonMember(
            "search target fails the group membership equation".into(),
        ));
    }
    for depth in 0..=budget.max_len {
        let mut acc = Vec::new();
        if search_step(fr, n, target, depth, budget, &mut acc) {
            let word = GeneratorWord::from_symbols(fr, n, acc);
            if word.eval() == *target {
                return Ok(word);
            }
        }
    }
    Err(WordError::SearchExhausted)
}
