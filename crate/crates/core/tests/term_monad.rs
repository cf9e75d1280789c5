use falg::signature::Symbol;
use falg::term::Term;
use falg::TermStore;
use proptest::prelude::*;

fn term() -> impl Strategy<Value = Term<u8>> {
    let leaf = prop_oneof![
        (0u8..4).prop_map(Term::Var),
        Just(Term::constant(Symbol::new("c"))),
    ];
    leaf.prop_recursive(4, 32, 2, |inner| {
        prop_oneof![
            inner
                .clone()
                .prop_map(|t| Term::app(Symbol::new("f"), vec![t])),
            (inner.clone(), inner).prop_map(|(a, b)| Term::app(Symbol::new("g"), vec![a, b])),
        ]
    })
}

/// A substitution given by one term per leaf value.
fn kleisli() -> impl Strategy<Value = Vec<Term<u8>>> {
    prop::collection::vec(term(), 4)
}

proptest! {
    #[test]
    fn unit_laws(t in term()) {
        let wrapped: Term<Term<u8>> = Term::Var(t.clone());
        prop_assert_eq!(wrapped.flatten(), t.clone());
        prop_assert_eq!(t.map_vars(&mut |v| Term::Var(*v)).flatten(), t);
    }

    #[test]
    fn flattening_is_associative(t in term(), s in kleisli(), r in kleisli()) {
        let nested: Term<Term<Term<u8>>> = t.map_vars(&mut |v| s[*v as usize].map_vars(&mut |w| r[*w as usize].clone()));
        let outer_first = nested.flatten().flatten();
        let inner_first = nested.map_vars(&mut |x| x.flatten()).flatten();
        prop_assert_eq!(outer_first, inner_first);
    }

    #[test]
    fn substitution_composes(t in term(), s in kleisli(), r in kleisli()) {
        let step = t.substitute(&mut |v| s[*v as usize].clone()).substitute(&mut |w| r[*w as usize].clone());
        let composed = t.substitute(&mut |v| s[*v as usize].substitute(&mut |w| r[*w as usize].clone()));
        prop_assert_eq!(step, composed);
    }

    #[test]
    fn hash_consing_is_canonical(ts in prop::collection::vec(term(), 1..12)) {
        let mut store: TermStore<u8> = TermStore::new();
        let ids: Vec<_> = ts.iter().map(|t| store.intern(t)).collect();
        for (t, &id) in ts.iter().zip(&ids) {
            prop_assert_eq!(&store.term(id), t);
            prop_assert_eq!(store.get(t), Some(id));
        }
        for (i, s) in ts.iter().enumerate() {
            for (j, t) in ts.iter().enumerate() {
                prop_assert_eq!(ids[i] == ids[j], s == t);
            }
        }
        // Re-interning adds nothing.
        let size = store.len();
        for t in &ts {
            store.intern(t);
        }
        prop_assert_eq!(store.len(), size);
    }
}
