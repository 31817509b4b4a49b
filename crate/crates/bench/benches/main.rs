use criterion::{black_box, criterion_group, criterion_main, Criterion};

use wordlogic::equations::check_all;
use wordlogic::formula::{parse_sentence, PredInterp, PredRegistry};
use wordlogic::recogniser::compile;
use wordlogic::rewrite::{verify_chain, witness_chain};
use wordlogic::upset::UpSet;
use wordlogic_bench::{ab, recognisers, rewrite_pair, upset_pairs};

fn bench_upset_ops(c: &mut Criterion) {
    let pairs = upset_pairs(64);
    c.bench_function("upset/boolean_ops", |b| {
        b.iter(|| {
            for (s1, s2) in &pairs {
                black_box(s1.union(s2));
                black_box(s1.intersection(s2));
                black_box(s1.complement());
            }
        })
    });
    c.bench_function("upset/remainder_predicates", |b| {
        b.iter(|| {
            for (s1, s2) in &pairs {
                black_box(s1.almost_included(s2));
                black_box(s1.almost_equal(s2));
                black_box(s1.intersection_infinite(s2));
            }
        })
    });
}

fn bench_compile(c: &mut Criterion) {
    let mut reg = PredRegistry::new();
    reg.insert("EV", 1, PredInterp::Unary(UpSet::evens())).unwrap();
    reg.insert("M3", 1, PredInterp::Unary(UpSet::residue(0, 3))).unwrap();
    reg.insert("TH3", 1, PredInterp::Unary(UpSet::initial_segment(3))).unwrap();
    let alphabet = ab();
    let phi = parse_sentence(
        "((E x1 . a(x1) & EV(x1)) | !(E x1 . b(x1) & M3(x1))) & (E x1 . TH3(x1))",
        &alphabet,
        &reg,
    )
    .unwrap();
    c.bench_function("recogniser/compile", |b| {
        b.iter(|| black_box(compile(&phi, &alphabet, &reg).unwrap()))
    });
}

fn bench_check_all(c: &mut Criterion) {
    let instances = recognisers(4);
    c.bench_function("equations/check_all_len7", |b| {
        b.iter(|| {
            for (alphabet, r) in &instances {
                black_box(check_all(r, alphabet, r.colouring(), 7));
            }
        })
    });
}

fn bench_rewrite(c: &mut Criterion) {
    let (q, w1, w2) = rewrite_pair(10);
    c.bench_function("rewrite/witness_and_verify_len40", |b| {
        b.iter(|| {
            let chain = witness_chain(&q, &w1, &w2).unwrap();
            verify_chain(black_box(&chain), None).unwrap();
        })
    });
}

criterion_group!(benches, bench_upset_ops, bench_compile, bench_check_all, bench_rewrite);
criterion_main!(benches);
