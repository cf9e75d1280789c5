//! Signatures, the polynomial functor `H_Σ X = ∐ Σ_n × X^n`, and the stages
//! `W_0 = X`, `W_{n+1} = H_Σ W_n + X` of the free-monad chain evaluated at a
//! finite set of generators.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::finset::{Atom, FinMap, FinSet};
use crate::term::Term;
use crate::Limits;

/// An operation name.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(name: &str) -> Self {
        Symbol(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Symbol {
    fn from(name: &str) -> Self {
        Symbol::new(name)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A finite list of operation symbols with natural-number arities.
///
/// Over `Set` every such list is a super-finitary signature: only finitely
/// many arities are inhabited and each arity holds finitely many symbols.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct Signature {
    ops: Vec<(Symbol, usize)>,
    lookup: HashMap<Symbol, usize>,
}

impl Signature {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Checks that symbols are pairwise distinct.
    pub fn new<S: AsRef<str>>(ops: impl IntoIterator<Item = (S, usize)>) -> Result<Self> {
        let mut sig = Signature::default();
        for (name, arity) in ops {
            let sym = Symbol::new(name.as_ref());
            if sig.lookup.contains_key(&sym) {
                return Err(Error::DuplicateSymbol(sym.to_string()));
            }
            sig.lookup.insert(sym.clone(), sig.ops.len());
            sig.ops.push((sym, arity));
        }
        Ok(sig)
    }

    pub fn ops(&self) -> impl ExactSizeIterator<Item = (&Symbol, usize)> + '_ {
        self.ops.iter().map(|(s, a)| (s, *a))
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn arity(&self, op: &str) -> Option<usize> {
        self.lookup.get(&Symbol::new(op)).map(|&i| self.ops[i].1)
    }

    pub fn symbol(&self, op: &str) -> Option<&Symbol> {
        self.lookup.get(&Symbol::new(op)).map(|&i| &self.ops[i].0)
    }

    pub fn position(&self, op: &Symbol) -> Option<usize> {
        self.lookup.get(op).copied()
    }

    pub fn max_arity(&self) -> usize {
        self.ops.iter().map(|(_, a)| *a).max().unwrap_or(0)
    }

    /// The signature as an ℕ-indexed family `n ↦ Σ_n`, truncated after the
    /// largest inhabited arity. All later components are empty.
    pub fn by_arity(&self) -> Vec<Vec<Symbol>> {
        let mut family = vec![
            Vec::new();
            if self.ops.is_empty() {
                0
            } else {
                self.max_arity() + 1
            }
        ];
        for (s, a) in &self.ops {
            family[*a].push(s.clone());
        }
        family
    }

    /// Finite support and finite components. Holds for every value of this
    /// type; kept as an explicit check for callers assembling families.
    pub fn is_super_finitary(&self) -> bool {
        let family = self.by_arity();
        family.len() <= self.max_arity() + 1
            && family.iter().map(Vec::len).sum::<usize>() == self.ops.len()
    }
}

impl fmt::Debug for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.ops.iter().map(|(s, a)| (s, a)))
            .finish()
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (s, a)) in self.ops.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{s}:{a}")?;
        }
        f.write_str("}")
    }
}

/// `validate_signature`: builds a signature from symbol/arity pairs.
pub fn validate_signature(ops: &[(&str, usize)]) -> Result<Signature> {
    Signature::new(ops.iter().copied())
}

/// Predicted `|H_Σ X|`, or `None` on overflow.
pub fn polynomial_size(sig: &Signature, n: usize) -> Option<usize> {
    sig.ops().try_fold(0usize, |acc, (_, a)| {
        acc.checked_add(n.checked_pow(a as u32)?)
    })
}

fn tuples(n: usize, arity: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = if arity == 0 {
        1
    } else {
        n.checked_pow(arity as u32).unwrap_or(0)
    };
    (0..total).map(move |mut code| {
        let mut t = vec![0; arity];
        for slot in t.iter_mut().rev() {
            *slot = code % n.max(1);
            code /= n.max(1);
        }
        t
    })
}

/// `H_Σ X`: every flat application `op(x_1, .., x_k)`, as term atoms.
pub fn eval_polynomial(sig: &Signature, x: &FinSet) -> FinSet {
    let elems: Vec<&Atom> = x.iter().collect();
    let mut out = Vec::new();
    for (op, arity) in sig.ops() {
        for t in tuples(elems.len(), arity) {
            let args: Vec<Term<Atom>> = t.iter().map(|&i| Term::Var(elems[i].clone())).collect();
            out.push(Atom::term(Term::app(op.clone(), args)));
        }
    }
    FinSet::collect(out)
}

/// `H_Σ f`: `op(x_1..x_k) ↦ op(f x_1 .. f x_k)`.
pub fn eval_polynomial_on_map(sig: &Signature, f: &FinMap) -> Result<FinMap> {
    let source = eval_polynomial(sig, f.domain());
    let target = eval_polynomial(sig, f.codomain());
    let mut images = Vec::with_capacity(source.len());
    for a in source.iter() {
        let t = a.as_term().expect("polynomial elements are terms");
        let mapped = t.try_map_vars(&mut |x| f.apply(x).cloned())?;
        images.push(
            target
                .index_of(&Atom::term(mapped))
                .expect("image lies in H_Σ Y"),
        );
    }
    Ok(FinMap::from_indices(&source, &target, images))
}

/// One stage `W_n` of the free-monad chain at `X`.
#[derive(Clone, Debug)]
pub struct ChainStage {
    pub depth: usize,
    /// Terms of depth at most `depth`, as term atoms.
    pub carrier: FinSet,
    /// The connecting map `W_{depth-1} -> W_depth`; absent at depth 0.
    pub injection: Option<FinMap>,
}

/// Sizes `|W_0|, .., |W_n|` from the recurrence `t_{k+1} = Σ t_k^{ar} + |X|`.
pub fn chain_sizes(sig: &Signature, generators: usize, n: usize) -> Vec<Option<usize>> {
    let mut sizes = Vec::with_capacity(n + 1);
    let mut current = Some(generators);
    sizes.push(current);
    for _ in 0..n {
        current = current.and_then(|t| polynomial_size(sig, t)?.checked_add(generators));
        sizes.push(current);
    }
    sizes
}

/// Builds `W_n`. Elements of `W_{k+1}` are the operations applied to
/// elements of `W_k`, followed by the generators; the link is inclusion.
pub fn chain_stage(sig: &Signature, x: &FinSet, n: usize, limits: &Limits) -> Result<ChainStage> {
    if n > limits.max_depth {
        return Err(Error::DepthBudgetExceeded {
            depth: n,
            cap: limits.node_cap,
        });
    }
    for (depth, size) in chain_sizes(sig, x.len(), n).into_iter().enumerate() {
        match size {
            Some(s) if s <= limits.node_cap => {}
            _ => {
                return Err(Error::DepthBudgetExceeded {
                    depth,
                    cap: limits.node_cap,
                })
            }
        }
    }

    let generators: Vec<Term<Atom>> = x.iter().cloned().map(Term::Var).collect();
    let mut previous: Option<FinSet> = None;
    let mut current: Vec<Term<Atom>> = generators.clone();
    for _ in 0..n {
        let mut next = Vec::new();
        for (op, arity) in sig.ops() {
            for t in tuples(current.len(), arity) {
                let args: Vec<Term<Atom>> = t.iter().map(|&i| current[i].clone()).collect();
                next.push(Term::app(op.clone(), args));
            }
        }
        next.extend(generators.iter().cloned());
        previous = Some(FinSet::collect(current.into_iter().map(Atom::term)));
        current = next;
    }
    let carrier = FinSet::collect(current.into_iter().map(Atom::term));
    let injection = previous.map(|prev| {
        let images = prev
            .iter()
            .map(|a| carrier.index_of(a).expect("W_n is contained in W_{n+1}"))
            .collect();
        FinMap::from_indices(&prev, &carrier, images)
    });
    Ok(ChainStage {
        depth: n,
        carrier,
        injection,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(ops: &[(&str, usize)]) -> Signature {
        validate_signature(ops).unwrap()
    }

    #[test]
    fn validate_examples() {
        assert_eq!(sig(&[("f", 1)]).len(), 1);
        assert!(sig(&[]).is_empty());
        assert_eq!(
            validate_signature(&[("f", 1), ("f", 2)]).unwrap_err(),
            Error::DuplicateSymbol("f".into())
        );
        assert!(sig(&[("g", 2), ("e", 0)]).is_super_finitary());
    }

    #[test]
    fn by_arity_family() {
        let family = sig(&[("g", 2), ("e", 0), ("h", 2)]).by_arity();
        assert_eq!(family.len(), 3);
        assert_eq!(family[0], vec![Symbol::new("e")]);
        assert!(family[1].is_empty());
        assert_eq!(family[2].len(), 2);
    }

    #[test]
    fn polynomial_examples() {
        let two = FinSet::range(2);
        let one = FinSet::range(1);
        assert_eq!(eval_polynomial(&sig(&[("g", 2)]), &two).len(), 4);
        assert!(eval_polynomial(&sig(&[]), &two).is_empty());
        assert_eq!(eval_polynomial(&sig(&[("g", 2), ("e", 0)]), &one).len(), 2);
    }

    #[test]
    fn polynomial_on_constant_map() {
        let x = FinSet::range(3);
        let y = FinSet::from_names(&["y0", "y1"]).unwrap();
        let f = FinMap::new(&x, &y, |_| Atom::name("y0")).unwrap();
        let hf = eval_polynomial_on_map(&sig(&[("g", 2)]), &f).unwrap();
        let target = Atom::term(Term::app(
            "g".into(),
            vec![Term::Var(Atom::name("y0")), Term::Var(Atom::name("y0"))],
        ));
        for a in hf.domain().iter() {
            assert_eq!(hf.apply(a).unwrap(), &target);
        }
    }

    #[test]
    fn polynomial_functor_laws_on_small_maps() {
        let s = sig(&[("g", 2), ("f", 1), ("c", 0)]);
        let sets: Vec<FinSet> = (0..=3).map(FinSet::range).collect();
        for x in &sets {
            let hid = eval_polynomial_on_map(&s, &FinMap::identity(x)).unwrap();
            assert_eq!(hid, FinMap::identity(&eval_polynomial(&s, x)));
        }
        for x in &sets[..3] {
            for y in &sets[1..3] {
                for z in &sets[1..3] {
                    for f in FinMap::all(x, y) {
                        for g in FinMap::all(y, z) {
                            let lhs = eval_polynomial_on_map(&s, &f.then(&g).unwrap()).unwrap();
                            let rhs = eval_polynomial_on_map(&s, &f)
                                .unwrap()
                                .then(&eval_polynomial_on_map(&s, &g).unwrap())
                                .unwrap();
                            assert_eq!(lhs, rhs);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn chain_sizes_binary_single_generator() {
        let s = sig(&[("g", 2)]);
        let x = FinSet::range(1);
        let limits = Limits::default();
        let sizes: Vec<usize> = (0..=3)
            .map(|n| chain_stage(&s, &x, n, &limits).unwrap().carrier.len())
            .collect();
        assert_eq!(sizes, vec![1, 2, 5, 26]);
    }

    #[test]
    fn chain_without_operations_is_constant() {
        let x = FinSet::from_names(&["a", "b"]).unwrap();
        for n in 0..4 {
            let stage = chain_stage(&Signature::empty(), &x, n, &Limits::default()).unwrap();
            assert_eq!(stage.carrier.len(), 2);
        }
        let w0 = chain_stage(&sig(&[("g", 2)]), &x, 0, &Limits::default()).unwrap();
        let expected: Vec<Atom> = x.iter().map(|a| Atom::term(Term::Var(a.clone()))).collect();
        assert_eq!(w0.carrier.iter().cloned().collect::<Vec<_>>(), expected);
        assert!(w0.injection.is_none());
    }

    #[test]
    fn chain_links_are_injective() {
        let s = sig(&[("g", 2), ("f", 1)]);
        let x = FinSet::range(2);
        for n in 1..=3 {
            let stage = chain_stage(&s, &x, n, &Limits::default()).unwrap();
            assert!(stage.injection.unwrap().is_injective());
        }
    }

    #[test]
    fn chain_budget() {
        let s = sig(&[("g", 2)]);
        let x = FinSet::range(1);
        let limits = Limits {
            node_cap: 100,
            ..Limits::default()
        };
        assert!(matches!(
            chain_stage(&s, &x, 4, &limits),
            Err(Error::DepthBudgetExceeded { depth: 4, .. })
        ));
        assert!(matches!(
            chain_stage(&s, &x, 9, &Limits::default()),
            Err(Error::DepthBudgetExceeded { .. })
        ));
    }
}
