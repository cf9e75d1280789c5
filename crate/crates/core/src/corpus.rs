//! Small fixed and seeded inputs shared by tests, benchmarks and demos.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::adjunction::FiniteMonoid;
use crate::algebra::FiniteAlgebra;
use crate::colimit::OmegaChain;
use crate::congruence::{GroundPresentation, Relation};
use crate::equational::Equation;
use crate::finset::{Atom, FinMap, FinSet};
use crate::signature::Signature;
use crate::term::{enumerate_terms, parse_term};
use crate::Limits;

fn presentation(
    ops: &[(&str, usize)],
    gens: &[&str],
    relations: &[(&str, &str)],
) -> GroundPresentation {
    let sig = Signature::new(ops.iter().copied()).unwrap();
    let gens = FinSet::from_names(gens).unwrap();
    let rels = relations
        .iter()
        .map(|(l, r)| {
            (
                parse_term(l, &sig, Some(&gens)).unwrap(),
                parse_term(r, &sig, Some(&gens)).unwrap(),
            )
        })
        .collect();
    GroundPresentation::new(sig, gens, rels).unwrap()
}

/// Ground presentations whose quotient `TX/E` is finite.
pub fn saturating_presentations() -> Vec<(&'static str, GroundPresentation)> {
    vec![
        (
            "involution",
            presentation(&[("f", 1)], &["a"], &[("f(f(a))", "a")]),
        ),
        (
            "collapse",
            presentation(&[("f", 1)], &["a"], &[("f(a)", "a")]),
        ),
        (
            "mod 4",
            presentation(&[("s", 1)], &["a"], &[("s(s(s(s(a))))", "a")]),
        ),
        (
            "tail",
            presentation(&[("f", 1)], &["a"], &[("f(f(f(a)))", "f(a)")]),
        ),
        (
            "cyclic 3 with constant",
            presentation(
                &[("s", 1), ("e", 0)],
                &["a"],
                &[("s(s(s(a)))", "a"), ("e", "a")],
            ),
        ),
        (
            "swap",
            presentation(
                &[("u", 1), ("v", 1)],
                &["a", "b"],
                &[("u(a)", "b"), ("u(b)", "a"), ("v(a)", "a"), ("v(b)", "b")],
            ),
        ),
        (
            "idempotent square",
            presentation(&[("g", 2)], &["a"], &[("g(a, a)", "a")]),
        ),
        (
            "retraction",
            presentation(&[("f", 1)], &["a", "b"], &[("f(a)", "b"), ("f(b)", "b")]),
        ),
        (
            "absorbing",
            presentation(
                &[("g", 2), ("f", 1)],
                &["a"],
                &[
                    ("g(a, a)", "f(a)"),
                    ("f(f(a))", "f(a)"),
                    ("g(a, f(a))", "f(a)"),
                    ("g(f(a), a)", "f(a)"),
                    ("g(f(a), f(a))", "f(a)"),
                ],
            ),
        ),
        (
            "constants only",
            presentation(&[("c", 0), ("d", 0)], &[], &[("c", "d")]),
        ),
    ]
}

/// `{0..n-1}` with successor mod `n`.
pub fn successor_algebra(n: usize) -> FiniteAlgebra {
    let sig = Signature::new([("s", 1)]).unwrap();
    FiniteAlgebra::from_fn(sig, FinSet::range(n), |_, args| (args[0] + 1) % n).unwrap()
}

/// A finite monoid as an algebra over `{m:2, e:0}`.
pub fn monoid_algebra(m: &FiniteMonoid) -> FiniteAlgebra {
    let sig = monoid_signature();
    FiniteAlgebra::from_fn(sig, m.carrier().clone(), |pos, args| {
        if pos == 0 {
            m.mult(args[0], args[1])
        } else {
            m.unit_index()
        }
    })
    .unwrap()
}

/// An algebra with up to `max_ops` operations of arity at most 2 on up to
/// `max_size` elements; tables are uniform.
pub fn random_algebra(rng: &mut impl Rng, max_size: usize, max_ops: usize) -> FiniteAlgebra {
    let size = rng.gen_range(1..=max_size);
    let n_ops = rng.gen_range(1..=max_ops);
    let names = ["g", "h", "f", "k"];
    let ops: Vec<(&str, usize)> = (0..n_ops)
        .map(|i| (names[i], rng.gen_range(0..=2)))
        .collect();
    let sig = Signature::new(ops.iter().copied()).unwrap();
    let tables: Vec<Vec<usize>> = ops
        .iter()
        .map(|(_, a)| {
            (0..size.pow(*a as u32))
                .map(|_| rng.gen_range(0..size))
                .collect()
        })
        .collect();
    FiniteAlgebra::from_fn(sig, FinSet::range(size), |pos, args| {
        let code = args.iter().fold(0, |acc, &x| acc * size + x);
        tables[pos][code]
    })
    .unwrap()
}

/// Fixed small algebras plus `random` seeded ones, all with at most six
/// elements and two operations.
pub fn small_algebras(rng: &mut impl Rng, random: usize) -> Vec<FiniteAlgebra> {
    let mut out: Vec<FiniteAlgebra> = (1..=6).map(successor_algebra).collect();
    out.push(monoid_algebra(&FiniteMonoid::boolean_and()));
    out.push(monoid_algebra(&FiniteMonoid::cyclic(3)));
    out.push(monoid_algebra(&FiniteMonoid::klein()));
    let proj = Signature::new([("g", 2)]).unwrap();
    out.push(FiniteAlgebra::from_fn(proj, FinSet::range(3), |_, args| args[0]).unwrap());
    for _ in 0..random {
        out.push(random_algebra(rng, 6, 2));
    }
    out
}

pub fn monoid_signature() -> Signature {
    Signature::new([("m", 2), ("e", 0)]).unwrap()
}

fn equation(sig: &Signature, vars: &[&str], l: &str, r: &str) -> Equation {
    let vs = FinSet::from_names(vars).unwrap();
    let lhs = parse_term(l, sig, Some(&vs)).unwrap();
    let rhs = parse_term(r, sig, Some(&vs)).unwrap();
    Equation::new(sig, vs, lhs, rhs).unwrap()
}

/// Associativity and the two unit laws over `{m:2, e:0}`.
pub fn monoid_equations() -> (Signature, Vec<Equation>) {
    let sig = monoid_signature();
    let eqs = vec![
        equation(&sig, &["x", "y", "z"], "m(m(x, y), z)", "m(x, m(y, z))"),
        equation(&sig, &["x"], "m(e, x)", "x"),
        equation(&sig, &["x"], "m(x, e)", "x"),
    ];
    (sig, eqs)
}

/// `f(f(x)) = f(x)` over `{f:1}`.
pub fn idempotence_equations() -> (Signature, Vec<Equation>) {
    let sig = Signature::new([("f", 1)]).unwrap();
    let eqs = vec![equation(&sig, &["x"], "f(f(x))", "f(x)")];
    (sig, eqs)
}

/// Every unary algebra on `0..n` for `n` up to `max_size`.
pub fn all_unary_algebras(max_size: usize) -> Vec<FiniteAlgebra> {
    let sig = Signature::new([("f", 1)]).unwrap();
    let mut out = Vec::new();
    for n in 1..=max_size {
        let carrier = FinSet::range(n);
        for code in 0..n.pow(n as u32) {
            let table: Vec<usize> = (0..n).map(|i| code / n.pow(i as u32) % n).collect();
            out.push(
                FiniteAlgebra::from_fn(sig.clone(), carrier.clone(), |_, args| table[args[0]])
                    .unwrap(),
            );
        }
    }
    out
}

/// A ground presentation with at most three operations of arity at most
/// two, at most three generators and at most four relations between terms
/// of depth at most two.
pub fn random_ground_presentation(rng: &mut impl Rng) -> GroundPresentation {
    let names = ["f", "g", "h"];
    let n_ops = rng.gen_range(1..=3);
    let ops: Vec<(&str, usize)> = names[..n_ops]
        .iter()
        .map(|&n| (n, rng.gen_range(0..=2)))
        .collect();
    let sig = Signature::new(ops.iter().copied()).unwrap();
    let n_gens = rng.gen_range(0..=3);
    let gens = FinSet::collect(["a", "b", "c"][..n_gens].iter().map(|n| Atom::name(n)));
    let pool = enumerate_terms(&sig, &gens, 2, &Limits::default()).unwrap_or_default();
    let mut relations: Vec<Relation> = Vec::new();
    if !pool.is_empty() {
        for _ in 0..rng.gen_range(0..=4) {
            let l = pool.choose(rng).unwrap().clone();
            let r = pool.choose(rng).unwrap().clone();
            relations.push((l, r));
        }
    }
    GroundPresentation::new(sig, gens, relations).unwrap()
}

/// Chains exercised by the colimit checks, with a flag for chains in which
/// distinct elements merge.
pub fn chains(limits: &Limits) -> Vec<(OmegaChain, bool)> {
    let mut out = vec![
        (OmegaChain::constant(FinSet::range(3)), false),
        (OmegaChain::inclusions(), false),
        (OmegaChain::merging(2), true),
        (OmegaChain::merging(4), true),
        (OmegaChain::shrinking(4), true),
    ];
    let stages = vec![FinSet::range(3), FinSet::range(3), FinSet::range(2)];
    let rotate = FinMap::from_indices_checked(&stages[0], &stages[1], vec![1, 2, 0]).unwrap();
    let fold = FinMap::from_indices_checked(&stages[1], &stages[2], vec![0, 1, 1]).unwrap();
    out.push((
        OmegaChain::from_stages("rotate then fold", stages, vec![rotate, fold], false).unwrap(),
        true,
    ));
    for (name, p) in saturating_presentations() {
        if matches!(name, "involution" | "cyclic 3 with constant" | "swap") {
            out.push((OmegaChain::truncations(&p, limits).unwrap(), false));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{saturate, Saturation};
    use crate::equational::variety_membership;
    use crate::equational::EquationalPresentation;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn saturating_presentations_saturate() {
        let sizes: Vec<usize> = saturating_presentations()
            .iter()
            .map(
                |(name, p)| match saturate(p, 100, &Limits::default()).unwrap() {
                    Saturation::Finite(q) => q.algebra.len(),
                    Saturation::Inconclusive { .. } => panic!("{name} did not saturate"),
                },
            )
            .collect();
        assert_eq!(sizes, [2, 1, 4, 3, 3, 2, 1, 2, 2, 1]);
    }

    #[test]
    fn generated_inputs_respect_their_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for a in small_algebras(&mut rng, 50) {
            assert!(a.len() <= 6 && a.signature().len() <= 2);
        }
        for _ in 0..50 {
            let p = random_ground_presentation(&mut rng);
            assert!(p.signature.len() <= 3 && p.signature.max_arity() <= 2);
            assert!(p.generators.len() <= 3 && p.relations.len() <= 4);
        }
    }

    #[test]
    fn unary_algebras_and_idempotents() {
        let all = all_unary_algebras(3);
        assert_eq!(all.len(), 1 + 4 + 27);
        let (sig, eqs) = idempotence_equations();
        let theory = EquationalPresentation::new(sig, eqs).unwrap();
        let idempotent = all
            .iter()
            .filter(|a| variety_membership(a, &theory).unwrap())
            .count();
        // Idempotent self-maps of an n-set: 1, 3, 10.
        assert_eq!(idempotent, 1 + 3 + 10);
    }

    #[test]
    fn monoid_algebras_are_monoids() {
        let (sig, eqs) = monoid_equations();
        let theory = EquationalPresentation::new(sig, eqs).unwrap();
        for m in crate::adjunction::monoid_corpus() {
            assert!(variety_membership(&monoid_algebra(&m), &theory).unwrap());
        }
    }
}
