use std::time::Instant;

use falg::congruence::{closure_build, naive_closure_oracle, CongruenceIndex, GroundPresentation};
use falg::corpus;
use falg::signature::{chain_sizes, Signature};
use falg::term::{enumerate_terms, Term};
use falg::{Atom, FinSet, Limits};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn small_enough(p: &GroundPresentation) -> bool {
    chain_sizes(&p.signature, p.generators.len(), 3)[3].is_some_and(|n| n <= 300)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn closure_agrees_with_naive_oracle(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = corpus::random_ground_presentation(&mut rng);
        prop_assume!(small_enough(&p));
        let limits = Limits::default();
        let naive = naive_closure_oracle(&p, 3, &limits).unwrap();
        let terms = enumerate_terms(&p.signature, &p.generators, 3, &limits).unwrap();
        let frozen = closure_build(&p, &terms, &limits).unwrap().freeze();
        for t in &terms {
            for u in &terms {
                prop_assert_eq!(frozen.equal(t, u), naive.related(t, u).unwrap(), "{} vs {}", t, u);
            }
        }
    }

    /// Adding relations only merges classes, and adding terms never changes
    /// verdicts between terms already present.
    #[test]
    fn incremental_merges_are_conservative(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = corpus::random_ground_presentation(&mut rng);
        prop_assume!(small_enough(&p));
        let limits = Limits::default();
        let terms = enumerate_terms(&p.signature, &p.generators, 2, &limits).unwrap();
        prop_assume!(!terms.is_empty());
        let deeper = enumerate_terms(&p.signature, &p.generators, 3, &limits).unwrap();
        let mut idx = closure_build(&p, &terms, &limits).unwrap();
        let before: Vec<bool> = pairs(&terms).map(|(t, u)| idx.word_equal(t, u).unwrap()).collect();

        for t in &deeper {
            idx.add_term(t).unwrap();
        }
        let after_terms: Vec<bool> = pairs(&terms).map(|(t, u)| idx.word_equal(t, u).unwrap()).collect();
        prop_assert_eq!(&before, &after_terms);

        let extra = (terms[rng.gen_range(0..terms.len())].clone(), terms[rng.gen_range(0..terms.len())].clone());
        idx.merge(&extra.0, &extra.1).unwrap();
        prop_assert!(idx.word_equal(&extra.0, &extra.1).unwrap());
        let after_merge: Vec<bool> = pairs(&terms).map(|(t, u)| idx.word_equal(t, u).unwrap()).collect();
        for (was, now) in before.iter().zip(&after_merge) {
            prop_assert!(!was || *now);
        }

        // Merging all at once gives the same partition as merging one by one.
        let mut relations = p.relations.clone();
        relations.push(extra);
        let batch = closure_build(&p.with_relations(relations), &deeper, &limits).unwrap().freeze();
        for (t, u) in pairs(&deeper) {
            prop_assert_eq!(batch.equal(t, u), idx.word_equal(t, u).unwrap());
        }
    }
}

fn pairs(terms: &[Term<Atom>]) -> impl Iterator<Item = (&Term<Atom>, &Term<Atom>)> {
    terms
        .iter()
        .flat_map(move |t| terms.iter().map(move |u| (t, u)))
}

#[test]
fn hundred_thousand_relations_over_ten_thousand_nodes() {
    let sig = Signature::new([("f", 1)]).unwrap();
    let gens = FinSet::collect((0..10_000).map(|i| Atom::name(&format!("x{i}"))));
    let atoms: Vec<Atom> = gens.iter().cloned().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let relations: Vec<_> = (0..100_000)
        .map(|_| {
            let a = &atoms[rng.gen_range(0..atoms.len())];
            let b = &atoms[rng.gen_range(0..atoms.len())];
            (Term::Var(a.clone()), Term::Var(b.clone()))
        })
        .collect();
    let p = GroundPresentation::new(sig, gens, relations).unwrap();
    let start = Instant::now();
    let mut idx = CongruenceIndex::new(
        p.signature.clone(),
        p.generators.clone(),
        &Limits::default(),
    );
    for (l, r) in &p.relations {
        idx.merge(l, r).unwrap();
    }
    let first = Term::Var(atoms[0].clone());
    let joined = atoms
        .iter()
        .filter(|a| idx.word_equal(&first, &Term::Var((*a).clone())).unwrap())
        .count();
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "{elapsed:?}");
    // A random graph this dense is connected with overwhelming probability.
    assert_eq!(joined, atoms.len());
    assert_eq!(idx.class_count(), 1);
}
