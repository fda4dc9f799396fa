use std::hint::black_box;

use cnlcheck_core::algebra::normalize;
use cnlcheck_core::check_source;
use cnlcheck_core::cnl::{parse_formula, tokenize};
use cnlcheck_core::logic::{Formula, Sort, Term, TypeContext};
use cnlcheck_core::prover::{check_step, KnowledgeBase, ProverConfig};
use criterion::{criterion_group, criterion_main, Criterion};

const TEXTS: [(&str, &str); 4] = [
    ("text1", include_str!("../../../corpus/text1.txt")),
    ("text2", include_str!("../../../corpus/text2.txt")),
    ("div8", include_str!("../../../corpus/div8.txt")),
    ("denying-antecedent", include_str!("../../../corpus/mutations/prop-chain-denying-antecedent.txt")),
];

fn formula(s: &str) -> Formula {
    parse_formula(&tokenize(s).unwrap()).unwrap()
}

fn term(f: Formula) -> Term {
    match f {
        Formula::Eq(l, _) => l,
        _ => unreachable!(),
    }
}

fn corpus(c: &mut Criterion) {
    let mut group = c.benchmark_group("check");
    for (name, text) in TEXTS {
        group.bench_function(name, |b| b.iter(|| check_source(black_box(text))));
    }
    group.finish();
}

fn normalization(c: &mut Criterion) {
    let t = term(formula("(x + 2y - 3)^4 * (x - y)^3 = 0"));
    c.bench_function("normalize", |b| b.iter(|| normalize(black_box(&t)).unwrap()));
}

fn entailment(c: &mut Criterion) {
    let mut ctx = TypeContext::new();
    for p in ["P", "Q", "R", "S", "T"] {
        ctx.declare(p, Sort::Proposition).unwrap();
    }
    let facts = ["P → Q", "Q → R", "R → S", "S → T", "P ∨ ¬T"].map(formula).to_vec();
    let kb = KnowledgeBase::from_facts(ctx, facts);
    let cfg = ProverConfig::default();
    let valid = formula("T");
    let invalid = formula("¬P");
    c.bench_function("entails/valid", |b| b.iter(|| check_step(black_box(&valid), &kb, &cfg)));
    c.bench_function("entails/countermodel", |b| b.iter(|| check_step(black_box(&invalid), &kb, &cfg)));
}

criterion_group!(benches, corpus, normalization, entailment);
criterion_main!(benches);
