//! Oracles for the homotopy operator, dilation, and telescoping patching:
//! frozen plus-evaluations, exhaustive homotopy laws on a small truncated
//! ring, dilation exponents on localized words, and end-to-end
//! local-global certificates over (Z/6)[Y].

use formring::form::{FormParameterSpec, FormRing};
use formring::graded::{
    dilate, elementary_plus, graded_components, is_degree_zero, local_global_drive,
    matrix_plus_eval, plus_eval, telescope_patch, word_plus, Cover, CoverItem, GradedError,
};
use formring::matrix::{is_gq, FormMatrix};
use formring::ring::Ring;
use formring::words::{gen, symbol_matrix, GeneratorWord, SearchBudget, SymbolArg, SymbolKind};
use formring::Verdict;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn ring(desc: &str) -> Ring {
    Ring::parse_descriptor(desc).expect(desc)
}

fn symplectic(desc: &str) -> FormRing {
    let r = ring(desc);
    let l = r.from_i64(-1);
    FormRing::new(r, l, FormParameterSpec::Max).unwrap()
}

fn word(fr: &FormRing, n: usize, syms: &[(SymbolKind, usize, usize, &str)]) -> GeneratorWord {
    let mut w = GeneratorWord::new(fr, n);
    for (kind, i, j, arg) in syms {
        let a = fr.ring().parse(arg).unwrap();
        w.push(*kind, *i, *j, SymbolArg::Scalar(a)).unwrap();
    }
    w
}

#[test]
fn plus_eval_frozen_values() {
    let r = ring("poly(Z, Y)");
    let b = r.parse("2 + 3*Y").unwrap();

    let at_two = plus_eval(&r, &b, &r.from_i64(2)).unwrap();
    assert_eq!(at_two, r.parse("2 + 6*Y").unwrap());

    let at_zero = plus_eval(&r, &b, &r.zero()).unwrap();
    assert_eq!(at_zero, r.from_i64(2));
    assert_eq!(at_zero, graded_components(&r, &b)[0]);

    let chained = plus_eval(&r, &at_two, &r.from_i64(3)).unwrap();
    assert_eq!(chained, plus_eval(&r, &b, &r.from_i64(6)).unwrap());
    assert_eq!(chained, r.parse("2 + 18*Y").unwrap());

    // Positive-degree evaluation points are refused.
    assert!(matches!(
        plus_eval(&r, &b, &r.variable()),
        Err(GradedError::NotDegreeZero(_))
    ));
}

#[test]
fn components_by_ring_shape() {
    // Polynomial grading.
    let r = ring("poly(Z, Y)");
    let v = r.parse("1 + 2*Y + 5*Y^3").unwrap();
    let comps = graded_components(&r, &v);
    assert_eq!(comps.len(), 4);
    assert_eq!(comps[1], r.parse("2*Y").unwrap());
    assert!(r.is_zero(&comps[2]));
    let total = comps.iter().fold(r.zero(), |acc, c| r.add(&acc, c));
    assert_eq!(total, v);

    // Hyperbolic pairs are graded componentwise.
    let h = ring("hyp(poly(Z/3, Y))");
    let v = h.parse("(1 + Y, 2*Y)").unwrap();
    let comps = graded_components(&h, &v);
    assert_eq!(comps[0], h.parse("(1, 0)").unwrap());
    assert_eq!(comps[1], h.parse("(Y, 2*Y)").unwrap());
    assert!(is_degree_zero(&h, &comps[0]));
    assert!(!is_degree_zero(&h, &v));

    // Localized values keep their denominator on every component.
    let l = ring("loc(poly(Z, Y), 2)");
    let v = l.parse("(Y + 2*Y^2)/2").unwrap();
    let comps = graded_components(&l, &v);
    assert_eq!(comps[1], l.parse("Y/2").unwrap());
    assert_eq!(comps[2], l.parse("Y^2").unwrap());

    // Ungraded rings are concentrated in degree zero.
    let z = ring("Z/9");
    assert_eq!(graded_components(&z, &z.from_i64(7)), vec![z.from_i64(7)]);
    assert!(is_degree_zero(&z, &z.from_i64(7)));
}

#[test]
fn homotopy_laws_exhaustive_on_truncated_z4() {
    let r = ring("trunc(Z/4, 3, Y)");
    let elements = r.elements().unwrap();
    let points: Vec<_> = elements
        .iter()
        .filter(|a| is_degree_zero(&r, a))
        .cloned()
        .collect();
    assert_eq!(points.len(), 4);
    for b in &elements {
        let comps = graded_components(&r, b);
        assert_eq!(plus_eval(&r, b, &r.zero()).unwrap(), comps[0]);
        assert_eq!(plus_eval(&r, b, &r.one()).unwrap(), *b);
        for x in &points {
            let bx = plus_eval(&r, b, x).unwrap();
            for y in &points {
                let lhs = plus_eval(&r, &bx, y).unwrap();
                let rhs = plus_eval(&r, b, &r.mul(x, y)).unwrap();
                assert_eq!(lhs, rhs, "b = {b}, x = {x}, y = {y}");
            }
        }
    }
}

#[test]
fn matrix_plus_eval_tracks_generators() {
    let fr = symplectic("poly(Z, Y)");
    let r = fr.ring();
    let alpha = word(&fr, 3, &[(SymbolKind::QE, 1, 2, "Y")]).eval();

    let at_zero = matrix_plus_eval(r, &alpha, &r.zero()).unwrap();
    assert!(at_zero.is_identity());

    let c = r.from_i64(3);
    let at_c = matrix_plus_eval(r, &alpha, &c).unwrap();
    let expected = word(&fr, 3, &[(SymbolKind::QE, 1, 2, "3*Y")]).eval();
    assert_eq!(at_c, expected);
    assert!(is_gq(&fr, &at_c));
}

#[test]
fn matrix_plus_eval_is_multiplicative() {
    let fr = symplectic("trunc(Z/4, 3, Y)");
    let r = fr.ring().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let kinds = [SymbolKind::QE, SymbolKind::QR, SymbolKind::QL];
    let random_member = |rng: &mut ChaCha8Rng| {
        let mut w = GeneratorWord::new(&fr, 3);
        for _ in 0..3 {
            let kind = kinds[rng.gen_range(0..kinds.len())];
            let (i, j) = loop {
                let i = rng.gen_range(1..=3);
                let j = rng.gen_range(1..=3);
                if i != j {
                    break (i, j);
                }
            };
            let a = r.sample(rng);
            w.push(kind, i, j, SymbolArg::Scalar(a)).unwrap();
        }
        w.eval()
    };
    for _ in 0..20 {
        let alpha = random_member(&mut rng);
        let beta = random_member(&mut rng);
        let a = r.from_i64(rng.gen_range(0..4));
        let lhs = matrix_plus_eval(&r, &alpha.mul(&beta), &a).unwrap();
        let rhs = matrix_plus_eval(&r, &alpha, &a)
            .unwrap()
            .mul(&matrix_plus_eval(&r, &beta, &a).unwrap());
        assert_eq!(lhs, rhs);
        assert!(is_gq(&fr, &matrix_plus_eval(&r, &alpha, &a).unwrap()));
    }
}

#[test]
fn elementary_plus_maps_arguments() {
    let fr = symplectic("poly(Z, Y)");
    let r = fr.ring();

    // a = 1 leaves the word alone.
    let w = word(&fr, 3, &[(SymbolKind::QE, 1, 2, "1 + Y")]);
    let cert = elementary_plus(&w, &r.one()).unwrap();
    assert_eq!(cert.word.eval(), w.eval());

    // a = 0 extracts degree-zero arguments.
    let cert = elementary_plus(&w, &r.zero()).unwrap();
    assert_eq!(cert.word.symbols().len(), 1);
    assert_eq!(
        cert.word.symbols()[0].scalar_arg().unwrap(),
        &r.one()
    );

    // Degree-2 arguments scale quadratically.
    let w = word(&fr, 3, &[(SymbolKind::QR, 1, 2, "Y^2")]);
    let cert = elementary_plus(&w, &r.from_i64(2)).unwrap();
    assert_eq!(
        cert.word.symbols()[0].scalar_arg().unwrap(),
        &r.parse("4*Y^2").unwrap()
    );
    assert!(cert.verify());

    // Inversion flags survive the mapping.
    let mut w = word(&fr, 3, &[(SymbolKind::QL, 2, 3, "Y + Y^3")]);
    let mut inv = w.symbols()[0].clone();
    inv.inverted = true;
    w.push_symbol(inv);
    let mapped = word_plus(&w, &r.from_i64(5)).unwrap();
    assert!(mapped.eval().is_identity());
}

#[test]
fn covers_certify_their_combination() {
    let r = ring("poly(Z/6, Y)");
    let cover = Cover::parse(&r, "3^1,4^1").unwrap();
    assert_eq!(cover.len(), 2);
    assert_eq!(cover.piece(&r, 0), r.from_i64(3));
    assert_eq!(cover.piece(&r, 1), r.from_i64(4));
    assert_eq!(cover.to_string(), "3^1,4^1");

    // 4^2 + 2*3^1 = 16 + 6 = 22 = 1 mod 7.
    let r7 = ring("poly(Z/7, Y)");
    let cover = Cover::parse(&r7, "4^2,2*3^1").unwrap();
    assert_eq!(cover.piece(&r7, 0), r7.from_i64(2));
    assert_eq!(cover.piece(&r7, 1), r7.from_i64(6));

    assert!(matches!(
        Cover::parse(&r, "2^1"),
        Err(GradedError::CoverSum(_))
    ));
    assert!(matches!(Cover::new(&r, vec![]), Err(GradedError::CoverSum(_))));

    // Positive-degree cover elements are refused.
    let items = vec![CoverItem {
        s: r.variable(),
        exponent: 1,
        coefficient: r.one(),
    }];
    assert!(matches!(
        Cover::new(&r, items),
        Err(GradedError::NotDegreeZero(_))
    ));
}

#[test]
fn telescoping_factors_multiply_back() {
    let fr = symplectic("poly(Z/6, Y)");
    let r = fr.ring();
    let alpha = word(&fr, 3, &[(SymbolKind::QE, 1, 2, "Y")]).eval();
    let cover = Cover::parse(r, "3^1,4^1").unwrap();

    let report = telescope_patch(r, &alpha, &cover).unwrap();
    assert_eq!(report.factors.len(), 2);
    assert_eq!(report.product, alpha);

    // With b1 = 3, b2 = 4: F1 = alpha^+(1) * alpha^+(4)^{-1} = qe12(3Y)
    // and F2 = alpha^+(4) = qe12(4Y), frozen.
    let f1 = word(&fr, 3, &[(SymbolKind::QE, 1, 2, "3*Y")]).eval();
    let f2 = word(&fr, 3, &[(SymbolKind::QE, 1, 2, "4*Y")]).eval();
    assert_eq!(report.factors[0], f1);
    assert_eq!(report.factors[1], f2);

    // Single-piece cover: the only factor is alpha itself.
    let trivial = Cover::parse(r, "1^1").unwrap();
    let report = telescope_patch(r, &alpha, &trivial).unwrap();
    assert_eq!(report.factors.len(), 1);
    assert_eq!(report.factors[0], alpha);

    // A matrix with nontrivial degree-zero part is rejected.
    let off = word(&fr, 3, &[(SymbolKind::QE, 1, 2, "1 + Y")]).eval();
    assert!(matches!(
        telescope_patch(r, &off, &cover),
        Err(GradedError::DegreeZeroResidue(_))
    ));
}

#[test]
fn telescoping_on_longer_random_words() {
    let fr = symplectic("poly(Z/6, Y)");
    let r = fr.ring().clone();
    let cover = Cover::parse(&r, "3^1,4^1").unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let kinds = [SymbolKind::QE, SymbolKind::QR, SymbolKind::QL];
    for _ in 0..15 {
        let mut w = GeneratorWord::new(&fr, 3);
        for _ in 0..4 {
            let kind = kinds[rng.gen_range(0..kinds.len())];
            let (i, j) = loop {
                let i = rng.gen_range(1..=3);
                let j = rng.gen_range(1..=3);
                if i != j {
                    break (i, j);
                }
            };
            // Positive-degree arguments keep the degree-zero part trivial.
            let c1 = rng.gen_range(0..6);
            let c2 = rng.gen_range(0..6);
            let a = r.parse(&format!("{c1}*Y + {c2}*Y^2")).unwrap();
            w.push(kind, i, j, SymbolArg::Scalar(a)).unwrap();
        }
        let alpha = w.eval();
        let report = telescope_patch(&r, &alpha, &cover).unwrap();
        assert_eq!(report.product, alpha);
    }
}

#[test]
fn dilation_clears_denominators() {
    let fr = symplectic("loc(poly(Z, Y), 2)");
    let base = ring("poly(Z, Y)");

    // [QE 1 2 (Y/2)] dilates at l = 1 to [QE 1 2 (Y)].
    let w = word(&fr, 3, &[(SymbolKind::QE, 1, 2, "Y/2")]);
    let (l, cert) = dilate(&w, None).unwrap();
    assert_eq!(l, 1);
    assert_eq!(cert.word.symbols().len(), 1);
    assert_eq!(
        cert.word.symbols()[0].scalar_arg().unwrap(),
        &base.variable()
    );
    assert!(cert.verify());

    // Degree-2 argument with denominator 4 also needs only l = 1.
    let w = word(&fr, 3, &[(SymbolKind::QR, 1, 2, "Y^2/4")]);
    let (l, cert) = dilate(&w, None).unwrap();
    assert_eq!(l, 1);
    assert_eq!(
        cert.word.symbols()[0].scalar_arg().unwrap(),
        &base.parse("Y^2").unwrap()
    );

    // Mixed degrees: Y/2 + Y^3/2 at l = 1 gives Y + 4Y^3.
    let w = word(&fr, 3, &[(SymbolKind::QE, 1, 2, "(Y + Y^3)/2")]);
    let (l, cert) = dilate(&w, None).unwrap();
    assert_eq!(l, 1);
    assert_eq!(
        cert.word.symbols()[0].scalar_arg().unwrap(),
        &base.parse("Y + 4*Y^3").unwrap()
    );

    // No denominators at all: l = 0 and the pullback is the evaluation.
    let w = word(&fr, 3, &[(SymbolKind::QE, 1, 3, "Y")]);
    let (l, cert) = dilate(&w, None).unwrap();
    assert_eq!(l, 0);
    let direct = word(
        &symplectic("poly(Z, Y)"),
        3,
        &[(SymbolKind::QE, 1, 3, "Y")],
    );
    assert_eq!(cert.word.eval(), direct.eval());

    // A requested exponent is honored or reported as insufficient.
    let w = word(&fr, 3, &[(SymbolKind::QE, 1, 2, "Y/2")]);
    assert!(dilate(&w, Some(2)).is_ok());
    assert!(matches!(
        dilate(&w, Some(0)),
        Err(GradedError::Certificate(_))
    ));
}

#[test]
fn dilation_rejects_degree_zero_residue() {
    let fr = symplectic("loc(poly(Z, Y), 2)");

    // Nontrivial degree-zero evaluation.
    let w = word(&fr, 3, &[(SymbolKind::QE, 1, 2, "1/2")]);
    assert!(matches!(
        dilate(&w, None),
        Err(GradedError::DegreeZeroResidue(_))
    ));

    // Evaluation is clean but an argument keeps a degree-zero denominator
    // that no exponent can clear.
    let w = word(
        &fr,
        3,
        &[
            (SymbolKind::QE, 1, 2, "(1 + Y)/2"),
            (SymbolKind::QE, 1, 2, "-1/2"),
        ],
    );
    assert!(matches!(
        dilate(&w, None),
        Err(GradedError::DegreeZeroResidue(_))
    ));

    // Dilation only applies over localized rings.
    let plain = symplectic("poly(Z, Y)");
    let w = word(&plain, 3, &[(SymbolKind::QE, 1, 2, "Y")]);
    assert!(matches!(dilate(&w, None), Err(GradedError::Unsupported(_))));
}

#[test]
fn local_global_drive_certifies_over_z6() {
    let fr = symplectic("poly(Z/6, Y)");
    let r = fr.ring();
    let budget = SearchBudget::default();

    // The worked example: one generator with a positive-degree argument.
    let alpha = word(&fr, 3, &[(SymbolKind::QE, 1, 2, "Y")]).eval();
    let report = local_global_drive(&fr, &alpha, &budget).unwrap();
    assert_eq!(report.verdict, Verdict::True);
    assert_eq!(report.patches.len(), 2);
    assert_eq!(
        report
            .patches
            .iter()
            .map(|p| (p.prime, p.power))
            .collect::<Vec<_>>(),
        vec![(2, 1), (3, 1)]
    );
    let cover = report.cover.as_ref().unwrap();
    assert_eq!(cover.to_string(), "3^1,4^1");
    let cert = report.certificate.as_ref().unwrap();
    assert!(cert.verify());
    assert_eq!(cert.word.eval(), alpha);

    // The identity matrix yields a trivial certificate.
    let ident = FormMatrix::identity(r, 6);
    let report = local_global_drive(&fr, &ident, &budget).unwrap();
    assert_eq!(report.verdict, Verdict::True);
    assert!(report.certificate.as_ref().unwrap().word.eval().is_identity());

    // Two generators with positive-degree arguments, end to end.
    let alpha = word(
        &fr,
        3,
        &[(SymbolKind::QE, 1, 2, "Y"), (SymbolKind::QR, 2, 3, "2*Y")],
    )
    .eval();
    let report = local_global_drive(&fr, &alpha, &budget).unwrap();
    assert_eq!(report.verdict, Verdict::True);
    assert_eq!(report.certificate.as_ref().unwrap().word.eval(), alpha);
}

#[test]
fn local_global_drive_degrades_to_unknown() {
    let fr = symplectic("poly(Z/6, Y)");
    let alpha = word(
        &fr,
        3,
        &[(SymbolKind::QE, 1, 2, "Y"), (SymbolKind::QR, 2, 3, "2*Y")],
    )
    .eval();
    let starved = SearchBudget {
        max_len: 0,
        ..SearchBudget::default()
    };
    let report = local_global_drive(&fr, &alpha, &starved).unwrap();
    assert_eq!(report.verdict, Verdict::Unknown);
    assert!(report.certificate.is_none());
    assert!(report.cover.is_none());
    assert!(report.patches.iter().any(|p| p.word.is_none()));
}

#[test]
fn local_global_drive_validates_inputs() {
    let budget = SearchBudget::default();

    // Degree-zero part must be the identity.
    let fr = symplectic("poly(Z/6, Y)");
    let off = word(&fr, 3, &[(SymbolKind::QE, 1, 2, "1 + Y")]).eval();
    assert!(matches!(
        local_global_drive(&fr, &off, &budget),
        Err(GradedError::DegreeZeroResidue(_))
    ));

    // Integer coefficients are not enumerable.
    let fr_z = symplectic("poly(Z, Y)");
    let alpha = word(&fr_z, 3, &[(SymbolKind::QE, 1, 2, "Y")]).eval();
    assert!(matches!(
        local_global_drive(&fr_z, &alpha, &budget),
        Err(GradedError::Unsupported(_))
    ));

    // Size below 6 is out of the driver's range.
    let small = FormMatrix::identity(fr.ring(), 4);
    assert!(matches!(
        local_global_drive(&fr, &small, &budget),
        Err(GradedError::Unsupported(_))
    ));
}

#[test]
fn single_prime_modulus_still_patches() {
    // Z/4 has one maximal ideal; the cover degenerates to 1^1.
    let fr = symplectic("poly(Z/4, Y)");
    let alpha = word(&fr, 3, &[(SymbolKind::QE, 2, 3, "2*Y")]).eval();
    let report = local_global_drive(&fr, &alpha, &SearchBudget::default()).unwrap();
    assert_eq!(report.verdict, Verdict::True);
    assert_eq!(report.patches.len(), 1);
    assert_eq!(report.cover.as_ref().unwrap().to_string(), "1^1");
    assert_eq!(report.certificate.as_ref().unwrap().word.eval(), alpha);
}

#[test]
fn generator_images_survive_plus_and_symbol_matrix_agree() {
    // plus_eval on a generator argument matches matrix_plus_eval on the
    // generator matrix, for involution-fixed evaluation points.
    let fr = symplectic("trunc(Z/4, 2, Y)");
    let r = fr.ring();
    for text in ["Y", "1 + Y", "2*Y + Y^2", "3 + 2*Y^2"] {
        let a = r.parse(text).unwrap();
        let sym = gen(&fr, 3, SymbolKind::QE, 1, 3, SymbolArg::Scalar(a.clone())).unwrap();
        let m = symbol_matrix(&fr, 3, &sym);
        for c in 0..4 {
            let point = r.from_i64(c);
            let scaled = plus_eval(r, &a, &point).unwrap();
            let sym2 = gen(&fr, 3, SymbolKind::QE, 1, 3, SymbolArg::Scalar(scaled)).unwrap();
            assert_eq!(
                symbol_matrix(&fr, 3, &sym2),
                matrix_plus_eval(r, &m, &point).unwrap()
            );
        }
    }
}
