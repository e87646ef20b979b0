use criterion::{criterion_group, criterion_main, Criterion};
use formring::graded::{local_global_drive, telescope_patch, Cover};
use formring::matrix::Vector;
use formring::ring::Ring;
use formring::witt::witt_decompose;
use formring::words::{factor_transvection, SearchBudget};
use formring_bench::{sample_word, symplectic};
use std::hint::black_box;

fn bench_eval_word(c: &mut Criterion) {
    let fr = symplectic("Z/5");
    let word = sample_word(&fr, 3);
    c.bench_function("eval_word_12_symbols_n3", |b| {
        b.iter(|| black_box(&word).eval())
    });
}

fn bench_factor_transvection(c: &mut Criterion) {
    let fr = symplectic("Z/5");
    let r = fr.ring().clone();
    let word = sample_word(&fr, 3);
    let eps = word.eval();
    // w orthogonal to v = eps e1: start from eps applied to a vector with
    // zero entry at position n, then zero the pairing by construction.
    let mut w1 = Vector::zero(&r, 6);
    w1.set(1, r.one());
    w1.set(4, r.from_i64(2));
    let w = w1.apply(&eps);
    c.bench_function("factor_transvection_n3", |b| {
        b.iter(|| factor_transvection(black_box(&word), black_box(&w)).unwrap())
    });
}

fn bench_witt_decompose(c: &mut Criterion) {
    let rt = Ring::parse_descriptor("trunc(Z/4, 6)").unwrap();
    let p = rt.parse("1 + X + 2X^2 + 3X^3 + X^4 + 2X^5 + X^6").unwrap();
    c.bench_function("witt_decompose_t6", |b| {
        b.iter(|| witt_decompose(black_box(&rt), black_box(&p)).unwrap())
    });
}

fn bench_telescope_patch(c: &mut Criterion) {
    let fr = symplectic("poly(Z/6, Y)");
    let r = fr.ring().clone();
    let word = sample_word(&fr, 3);
    let y = r.variable();
    let mut graded = formring::words::GeneratorWord::new(&fr, 3);
    for sym in word.symbols() {
        let mut sym = sym.clone();
        if let Some(a) = sym.scalar_arg() {
            sym = formring::words::gen(
                &fr,
                3,
                sym.kind,
                sym.i,
                sym.j,
                formring::words::SymbolArg::Scalar(r.mul(a, &y)),
            )
            .unwrap();
        }
        graded.push_symbol(sym);
    }
    let alpha = graded.eval();
    let cover = Cover::parse(&r, "3^1,4^1").unwrap();
    c.bench_function("telescope_patch_two_pieces", |b| {
        b.iter(|| telescope_patch(black_box(&r), black_box(&alpha), &cover).unwrap())
    });
}

fn bench_lg_drive(c: &mut Criterion) {
    let fr = symplectic("poly(Z/6, Y)");
    let r = fr.ring().clone();
    let y = r.variable();
    let mut word = formring::words::GeneratorWord::new(&fr, 3);
    word.push_symbol(
        formring::words::gen(
            &fr,
            3,
            formring::words::SymbolKind::QE,
            1,
            2,
            formring::words::SymbolArg::Scalar(y),
        )
        .unwrap(),
    );
    let alpha = word.eval();
    let budget = SearchBudget::default();
    c.bench_function("local_global_drive_qe12", |b| {
        b.iter(|| local_global_drive(black_box(&fr), black_box(&alpha), &budget).unwrap())
    });
}

criterion_group!(
    benches,
    bench_eval_word,
    bench_factor_transvection,
    bench_witt_decompose,
    bench_telescope_patch,
    bench_lg_drive
);
criterion_main!(benches);
