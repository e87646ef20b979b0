//! Fixture builders shared by the benchmarks.

use formring::form::{FormParameterSpec, FormRing};
use formring::ring::Ring;
use formring::words::{gen, GeneratorWord, SymbolArg, SymbolKind};

pub fn symplectic(desc: &str) -> FormRing {
    let r = Ring::parse_descriptor(desc).unwrap();
    let minus_one = r.neg(&r.one());
    FormRing::new(r, minus_one, FormParameterSpec::Max).unwrap()
}

/// A fixed twelve-symbol word touching every scalar generator kind.
pub fn sample_word(fr: &FormRing, n: usize) -> GeneratorWord {
    let r = fr.ring();
    let table: &[(SymbolKind, usize, usize, i64)] = &[
        (SymbolKind::QE, 1, 2, 1),
        (SymbolKind::QR, 1, 3, 2),
        (SymbolKind::QL, 3, 1, 1),
        (SymbolKind::QE, 2, 3, 3),
        (SymbolKind::QR, 2, 1, 1),
        (SymbolKind::QL, 1, 2, 2),
        (SymbolKind::QE, 3, 1, 2),
        (SymbolKind::QR, 3, 2, 3),
        (SymbolKind::QL, 2, 3, 1),
        (SymbolKind::QE, 1, 3, 4),
        (SymbolKind::QR, 1, 2, 1),
        (SymbolKind::QL, 2, 1, 3),
    ];
    let mut word = GeneratorWord::new(fr, n);
    for &(kind, i, j, a) in table {
        let arg = SymbolArg::Scalar(r.from_i64(a));
        word.push_symbol(gen(fr, n, kind, i, j, arg).unwrap());
    }
    word
}
