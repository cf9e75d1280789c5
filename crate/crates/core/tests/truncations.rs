use std::collections::BTreeSet;

use falg::algebra::{saturate, Saturation};
use falg::colimit::{chain_colimit, OmegaChain};
use falg::corpus;
use falg::Limits;

#[test]
fn truncation_colimit_is_the_saturated_quotient() {
    let limits = Limits::default();
    for (name, p) in corpus::saturating_presentations() {
        let Saturation::Finite(q) = saturate(&p, 100, &limits).unwrap() else {
            panic!("{name} did not saturate");
        };
        let mut chain = OmegaChain::truncations(&p, &limits).unwrap();
        let col = chain_colimit(&mut chain, 6, &limits).unwrap();
        assert_eq!(col.len(), q.algebra.len(), "{name}");
        // Each colimit class lands on its own quotient element.
        let images: BTreeSet<usize> = (0..col.len())
            .map(|c| {
                let (_, x) = &col.members(c)[0];
                q.evaluation.eval(x.as_term().unwrap()).unwrap()
            })
            .collect();
        assert_eq!(images.len(), q.algebra.len(), "{name}");
    }
}
