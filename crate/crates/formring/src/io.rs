//! Text and JSON interchange: ring context headers, matrix grids,
//! generator word files, certificate bundles, and report rendering.
//!
//! Everything here works on strings so it can be tested without touching
//! the filesystem; the command-line front end does the file plumbing.

use crate::form::{FormError, FormParameterSpec, FormRing};
use crate::matrix::FormMatrix;
use crate::ring::Ring;
use crate::words::{gen, Certificate, CertifiedClaim, GeneratorSymbol, GeneratorWord, SymbolArg, SymbolKind, WordError};
use crate::Verdict;
use serde_json::Value;
use std::fmt;

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("line {line}: {msg}")]
    Line { line: usize, msg: String },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

fn at_line(line: usize, msg: impl fmt::Display) -> IoError {
    IoError::Line {
        line,
        msg: msg.to_string(),
    }
}

// ---------------------------------------------------------------------------
// ring context headers

/// A fully validated ring context: the form ring plus the block size n.
#[derive(Debug, Clone)]
pub struct Context {
    pub form_ring: FormRing,
    pub n: usize,
}

/// Parses `ring=Z/6; lambda=-1; form=max; n=3`. Key order is free; all
/// four keys are required. `form` is `min`, `max`, or `gen{a, b, ...}`.
pub fn parse_context(header: &str) -> Result<Context, IoError> {
    let mut ring_desc = None;
    let mut lambda_src = None;
    let mut form_src = None;
    let mut n_src = None;
    for part in header.split(';') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| IoError::Invalid(format!("expected key=value, got {part:?}")))?;
        let value = value.trim();
        match key.trim() {
            "ring" => ring_desc = Some(value.to_string()),
            "lambda" => lambda_src = Some(value.to_string()),
            "form" => form_src = Some(value.to_string()),
            "n" => n_src = Some(value.to_string()),
            other => {
                return Err(IoError::Invalid(format!("unknown context key {other:?}")));
            }
        }
    }
    let ring_desc =
        ring_desc.ok_or_else(|| IoError::Invalid("context is missing `ring=`".into()))?;
    let lambda_src =
        lambda_src.ok_or_else(|| IoError::Invalid("context is missing `lambda=`".into()))?;
    let form_src =
        form_src.ok_or_else(|| IoError::Invalid("context is missing `form=`".into()))?;
    let n_src = n_src.ok_or_else(|| IoError::Invalid("context is missing `n=`".into()))?;

    let ring = Ring::parse_descriptor(&ring_desc)
        .map_err(|e| IoError::Invalid(format!("bad ring descriptor: {e}")))?;
    let lambda = ring
        .parse(&lambda_src)
        .map_err(|e| IoError::Invalid(format!("bad lambda: {e}")))?;
    let form = parse_form_spec(&ring, &form_src)?;
    let n: usize = n_src
        .parse()
        .map_err(|_| IoError::Invalid(format!("bad n: {n_src:?}")))?;
    if n == 0 {
        return Err(IoError::Invalid("n must be at least 1".into()));
    }
    let form_ring = FormRing::new(ring, lambda, form)?;
    Ok(Context { form_ring, n })
}

fn parse_form_spec(ring: &Ring, src: &str) -> Result<FormParameterSpec, IoError> {
    match src {
        "min" => Ok(FormParameterSpec::Min),
        "max" => Ok(FormParameterSpec::Max),
        _ => {
            let inner = src
                .strip_prefix("gen{")
                .and_then(|s| s.strip_suffix('}'))
                .ok_or_else(|| {
                    IoError::Invalid(format!("form must be min, max, or gen{{...}}, got {src:?}"))
                })?;
            let mut gens = Vec::new();
            for piece in inner.split(',') {
                let piece = piece.trim();
                if piece.is_empty() {
                    continue;
                }
                let v = ring
                    .parse(piece)
                    .map_err(|e| IoError::Invalid(format!("bad form generator {piece:?}: {e}")))?;
                gens.push(v);
            }
            Ok(FormParameterSpec::Generated(gens))
        }
    }
}

fn form_spec_string(spec: &FormParameterSpec) -> String {
    match spec {
        FormParameterSpec::Min => "min".into(),
        FormParameterSpec::Max => "max".into(),
        FormParameterSpec::Generated(gens) => {
            let inner: Vec<String> = gens.iter().map(|g| g.to_string()).collect();
            format!("gen{{{}}}", inner.join(", "))
        }
    }
}

/// The canonical one-line header for a context.
pub fn context_string(ctx: &Context) -> String {
    format!(
        "ring={}; lambda={}; form={}; n={}",
        ctx.form_ring.ring(),
        ctx.form_ring.lambda(),
        form_spec_string(ctx.form_ring.form()),
        ctx.n
    )
}

// ---------------------------------------------------------------------------
// matrix grids

/// Renders a matrix as a JSON grid of element strings.
pub fn matrix_to_grid(m: &FormMatrix) -> Value {
    let rows: Vec<Value> = (0..m.size())
        .map(|i| {
            let row: Vec<Value> = (0..m.size())
                .map(|j| Value::String(m.get(i, j).to_string()))
                .collect();
            Value::Array(row)
        })
        .collect();
    Value::Array(rows)
}

/// Reads a square JSON grid of element strings (bare numbers are also
/// accepted) into a matrix over the given ring.
pub fn grid_to_matrix(r: &Ring, grid: &Value) -> Result<FormMatrix, IoError> {
    let rows = grid
        .as_array()
        .ok_or_else(|| IoError::Invalid("matrix grid must be a JSON array of rows".into()))?;
    let size = rows.len();
    if size == 0 {
        return Err(IoError::Invalid("matrix grid is empty".into()));
    }
    let mut out = Vec::with_capacity(size);
    for (i, row) in rows.iter().enumerate() {
        let cells = row
            .as_array()
            .ok_or_else(|| IoError::Invalid(format!("row {} is not an array", i + 1)))?;
        if cells.len() != size {
            return Err(IoError::Invalid(format!(
                "row {} has {} entries, expected {size}",
                i + 1,
                cells.len()
            )));
        }
        let mut parsed = Vec::with_capacity(size);
        for (j, cell) in cells.iter().enumerate() {
            let src = match cell {
                Value::String(s) => s.clone(),
                Value::Number(x) => x.to_string(),
                other => {
                    return Err(IoError::Invalid(format!(
                        "entry ({}, {}) is {other}, expected an element string",
                        i + 1,
                        j + 1
                    )));
                }
            };
            let v = r.parse(&src).map_err(|e| {
                IoError::Invalid(format!("entry ({}, {}): {e}", i + 1, j + 1))
            })?;
            parsed.push(v);
        }
        out.push(parsed);
    }
    Ok(FormMatrix::from_rows(r, out))
}

/// Splits a text file into its header line and the remaining payload
/// lines, skipping blanks and `#` comments. Returns (line_no, text).
fn header_and_body(src: &str) -> Result<((usize, &str), Vec<(usize, &str)>), IoError> {
    let mut header = None;
    let mut body = Vec::new();
    for (idx, raw) in src.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match header {
            None => header = Some((idx + 1, line)),
            Some(_) => body.push((idx + 1, line)),
        }
    }
    let header = header.ok_or_else(|| IoError::Invalid("file has no header line".into()))?;
    Ok((header, body))
}

/// Reads a matrix file: a context header line followed by a JSON grid
/// (which may span multiple lines).
pub fn read_matrix_str(src: &str) -> Result<(Context, FormMatrix), IoError> {
    let ((hline, header), body) = header_and_body(src)?;
    let ctx = parse_context(header).map_err(|e| at_line(hline, e))?;
    if body.is_empty() {
        return Err(IoError::Invalid("matrix file has no grid".into()));
    }
    let gline = body[0].0;
    let payload: String = body
        .iter()
        .map(|(_, line)| *line)
        .collect::<Vec<_>>()
        .join("\n");
    let grid: Value =
        serde_json::from_str(&payload).map_err(|e| at_line(gline, format!("bad grid: {e}")))?;
    let m = grid_to_matrix(ctx.form_ring.ring(), &grid).map_err(|e| at_line(gline, e))?;
    Ok((ctx, m))
}

/// Renders a matrix file (header + compact one-line grid).
pub fn write_matrix_str(ctx: &Context, m: &FormMatrix) -> String {
    format!(
        "{}\n{}\n",
        context_string(ctx),
        serde_json::to_string(&matrix_to_grid(m)).expect("grid serializes")
    )
}

// ---------------------------------------------------------------------------
// word lines

fn kind_token(kind: SymbolKind) -> &'static str {
    match kind {
        SymbolKind::QE => "QE",
        SymbolKind::QR => "QR",
        SymbolKind::QL => "QL",
        SymbolKind::HypE => "HYP_E",
        SymbolKind::T12 => "T12",
        SymbolKind::T21 => "T21",
    }
}

fn parse_kind(tok: &str) -> Option<SymbolKind> {
    Some(match tok {
        "QE" => SymbolKind::QE,
        "QR" => SymbolKind::QR,
        "QL" => SymbolKind::QL,
        "HYP_E" => SymbolKind::HypE,
        "T12" => SymbolKind::T12,
        "T21" => SymbolKind::T21,
        _ => return None,
    })
}

fn split_token(s: &str) -> (&str, &str) {
    let s = s.trim_start();
    match s.find(char::is_whitespace) {
        Some(k) => (&s[..k], s[k..].trim_start()),
        None => (s, ""),
    }
}

fn strip_inv(s: &str) -> (&str, bool) {
    let s = s.trim_end();
    if s == "INV" {
        return ("", true);
    }
    match s.strip_suffix("INV") {
        Some(head) if head.ends_with(char::is_whitespace) => (head.trim_end(), true),
        _ => (s, false),
    }
}

/// Parses one serialized generator symbol, e.g. `QE 1 2 1 + Y` or
/// `QL 3 3 2 INV` or `T12 [["0","1"],["1","0"]]`. Block transvection
/// arguments are inline JSON grids.
pub fn parse_symbol_line(fr: &FormRing, n: usize, line: &str) -> Result<GeneratorSymbol, IoError> {
    let (kind_tok, rest) = split_token(line.trim());
    let kind = parse_kind(kind_tok)
        .ok_or_else(|| IoError::Invalid(format!("unknown generator kind {kind_tok:?}")))?;
    let (body, inverted) = strip_inv(rest);
    let mut sym = match kind {
        SymbolKind::T12 | SymbolKind::T21 => {
            let grid: Value = serde_json::from_str(body)
                .map_err(|e| IoError::Invalid(format!("bad matrix argument: {e}")))?;
            let m = grid_to_matrix(fr.ring(), &grid)?;
            gen(fr, n, kind, 0, 0, SymbolArg::Matrix(m))?
        }
        _ => {
            let (i_tok, rest) = split_token(body);
            let (j_tok, arg_src) = split_token(rest);
            let i: usize = i_tok
                .parse()
                .map_err(|_| IoError::Invalid(format!("bad row index {i_tok:?}")))?;
            let j: usize = j_tok
                .parse()
                .map_err(|_| IoError::Invalid(format!("bad column index {j_tok:?}")))?;
            if arg_src.is_empty() {
                return Err(IoError::Invalid("generator argument is missing".into()));
            }
            let arg = fr
                .ring()
                .parse(arg_src)
                .map_err(|e| IoError::Invalid(format!("bad argument {arg_src:?}: {e}")))?;
            gen(fr, n, kind, i, j, SymbolArg::Scalar(arg))?
        }
    };
    sym.inverted = inverted;
    Ok(sym)
}

/// Renders one generator symbol in the line format read back by
/// [`parse_symbol_line`].
pub fn format_symbol(sym: &GeneratorSymbol) -> String {
    let inv = if sym.inverted { " INV" } else { "" };
    match &sym.arg {
        SymbolArg::Scalar(v) => {
            format!("{} {} {} {}{inv}", kind_token(sym.kind), sym.i, sym.j, v)
        }
        SymbolArg::Matrix(m) => {
            let grid = serde_json::to_string(&matrix_to_grid(m)).expect("grid serializes");
            format!("{} {grid}{inv}", kind_token(sym.kind))
        }
    }
}

/// Reads a word file: a context header, then one symbol per line.
pub fn read_word_str(src: &str) -> Result<(Context, GeneratorWord), IoError> {
    let ((hline, header), body) = header_and_body(src)?;
    let ctx = parse_context(header).map_err(|e| at_line(hline, e))?;
    let mut word = GeneratorWord::new(&ctx.form_ring, ctx.n);
    for (line_no, line) in body {
        let sym =
            parse_symbol_line(&ctx.form_ring, ctx.n, line).map_err(|e| at_line(line_no, e))?;
        word.push_symbol(sym);
    }
    Ok((ctx, word))
}

/// Renders a word file readable by [`read_word_str`].
pub fn write_word_str(word: &GeneratorWord) -> String {
    let ctx = Context {
        form_ring: word.form_ring().clone(),
        n: word.n(),
    };
    let mut out = context_string(&ctx);
    out.push('\n');
    for sym in word.symbols() {
        out.push_str(&format_symbol(sym));
        out.push('\n');
    }
    out
}

// ---------------------------------------------------------------------------
// certificate bundles

fn claim_token(claim: CertifiedClaim) -> &'static str {
    match claim {
        CertifiedClaim::Factors => "factors",
        CertifiedClaim::ReducesTo => "reduces-to",
    }
}

/// Serializes a certificate (with its context) as a JSON bundle.
pub fn write_certificate_str(ctx: &Context, cert: &Certificate) -> String {
    let word_lines: Vec<Value> = cert
        .word
        .symbols()
        .iter()
        .map(|s| Value::String(format_symbol(s)))
        .collect();
    let bundle = serde_json::json!({
        "claim": claim_token(cert.claim),
        "context": context_string(ctx),
        "subject": matrix_to_grid(&cert.subject),
        "target": matrix_to_grid(&cert.target),
        "word": word_lines,
    });
    let mut out = serde_json::to_string_pretty(&bundle).expect("certificate serializes");
    out.push('\n');
    out
}

/// Reads a certificate bundle back. The result is re-checkable via
/// [`Certificate::verify`]; reading does not verify.
pub fn read_certificate_str(src: &str) -> Result<(Context, Certificate), IoError> {
    let bundle: Value = serde_json::from_str(src)?;
    let obj = bundle
        .as_object()
        .ok_or_else(|| IoError::Invalid("certificate must be a JSON object".into()))?;
    let field = |name: &str| {
        obj.get(name)
            .ok_or_else(|| IoError::Invalid(format!("certificate is missing {name:?}")))
    };

    let header = field("context")?
        .as_str()
        .ok_or_else(|| IoError::Invalid("context must be a string".into()))?;
    let ctx = parse_context(header)?;
    let r = ctx.form_ring.ring();

    let claim = match field("claim")?.as_str() {
        Some("factors") => CertifiedClaim::Factors,
        Some("reduces-to") => CertifiedClaim::ReducesTo,
        other => {
            return Err(IoError::Invalid(format!(
                "claim must be \"factors\" or \"reduces-to\", got {other:?}"
            )));
        }
    };

    let subject = grid_to_matrix(r, field("subject")?)?;
    let target = grid_to_matrix(r, field("target")?)?;
    let expected = 2 * ctx.n;
    if subject.size() != expected || target.size() != expected {
        return Err(IoError::Invalid(format!(
            "certificate matrices must be {expected}x{expected} for n={}",
            ctx.n
        )));
    }

    let lines = field("word")?
        .as_array()
        .ok_or_else(|| IoError::Invalid("word must be an array of lines".into()))?;
    let mut word = GeneratorWord::new(&ctx.form_ring, ctx.n);
    for line in lines {
        let line = line
            .as_str()
            .ok_or_else(|| IoError::Invalid("word lines must be strings".into()))?;
        word.push_symbol(parse_symbol_line(&ctx.form_ring, ctx.n, line)?);
    }

    let cert = Certificate {
        claim,
        subject,
        word,
        target,
    };
    Ok((ctx, cert))
}

// ---------------------------------------------------------------------------
// verdicts and reports

pub fn verdict_token(v: Verdict) -> &'static str {
    match v {
        Verdict::True => "true",
        Verdict::False => "false",
        Verdict::Unknown => "unknown",
    }
}

/// The exit-code protocol: 0 verified/true, 1 false/counterexample,
/// 3 unknown (bounded search exhausted). Parse and validation failures
/// use 2 and never reach this mapping.
pub fn verdict_exit(v: Verdict) -> i32 {
    match v {
        Verdict::True => 0,
        Verdict::False => 1,
        Verdict::Unknown => 3,
    }
}

/// Renders a report as one line of JSON. serde_json orders object keys,
/// so identical inputs yield byte-identical output.
pub fn render_report(report: &Value) -> String {
    let mut out = serde_json::to_string(report).expect("report serializes");
    out.push('\n');
    out
}
