//! Exact arithmetic for form rings and Bak's general quadratic groups.
//!
//! The crate provides a small tower of concrete involutive rings, form
//! parameters over them, the hyperbolic matrix formalism with its
//! elementary generators, and certificate-producing factorization
//! routines: triangular and transvection reductions, graded homotopies
//! with dilation and local-global patching, Witt-coordinate
//! decompositions in truncated polynomial rings, and Higman
//! linearisation representatives. Everything is computed over explicit
//! small rings and every certificate is checked by exact re-evaluation.

pub mod form;
pub mod graded;
pub mod io;
pub mod matrix;
pub mod ring;
pub mod witt;
pub mod words;

pub use form::{lambda_check, FormError, FormParameterSpec, FormRing};
pub use graded::{Cover, CoverItem, GradedError, LgReport, TelescopeReport};
pub use io::{Context, IoError};
pub use witt::{HermitianMode, HigmanRep, WittCoordinates, WittError};
pub use matrix::{FormMatrix, Vector};
pub use ring::{ParseError, Ring, RingDescriptor, RingError, RingValue};
pub use words::{Certificate, GeneratorSymbol, GeneratorWord, SymbolArg, SymbolKind, WordError};

/// Outcome of a check that may be only semi-decidable: bounded searches
/// report [`Verdict::Unknown`] when they exhaust their budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    True,
    False,
    Unknown,
}

impl Verdict {
    pub fn from_bool(b: bool) -> Verdict {
        if b {
            Verdict::True
        } else {
            Verdict::False
        }
    }

    pub fn is_true(self) -> bool {
        self == Verdict::True
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::True => f.write_str("true"),
            Verdict::False => f.write_str("false"),
            Verdict::Unknown => f.write_str("unknown"),
        }
    }
}
