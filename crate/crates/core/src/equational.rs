//! Σ-equations with variables, satisfaction in finite algebras, and the
//! bounded, substitution-closed congruences that approximate the presented
//! monad `T_{Σ,E}` at a finite set of generators.
//!
//! Equality in an equational theory is only semi-decidable, so theory
//! queries answer [`Verdict::Equal`] or [`Verdict::Unknown`], never
//! "different".

use std::collections::HashSet;

use crate::algebra::FiniteAlgebra;
use crate::congruence::{CongruenceClass, CongruenceIndex, Relation};
use crate::error::{Error, Result};
use crate::finset::{Atom, FinMap, FinSet};
use crate::signature::Signature;
use crate::term::{enumerate_terms, Term, TermId};
use crate::Limits;

/// `lhs = rhs` with variables drawn from `vars`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equation {
    pub vars: FinSet,
    pub lhs: Term<Atom>,
    pub rhs: Term<Atom>,
}

impl Equation {
    pub fn new(sig: &Signature, vars: FinSet, lhs: Term<Atom>, rhs: Term<Atom>) -> Result<Self> {
        for side in [&lhs, &rhs] {
            side.check_arities(sig)?;
            if let Some(x) = side.leaves().into_iter().find(|x| !vars.contains(x)) {
                return Err(Error::UnknownGenerator(x.clone()));
            }
        }
        Ok(Equation { vars, lhs, rhs })
    }
}

/// A signature with finitely many equations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquationalPresentation {
    pub signature: Signature,
    pub equations: Vec<Equation>,
}

impl EquationalPresentation {
    pub fn new(signature: Signature, equations: Vec<Equation>) -> Result<Self> {
        for eq in &equations {
            eq.lhs.check_arities(&signature)?;
            eq.rhs.check_arities(&signature)?;
        }
        Ok(EquationalPresentation {
            signature,
            equations,
        })
    }
}

fn check_signature(a: &FiniteAlgebra, t: &Term<Atom>) -> Result<()> {
    t.check_arities(a.signature())
}

fn assignments(vars: &FinSet, carrier: &FinSet) -> impl Iterator<Item = FinMap> {
    FinMap::all(vars, carrier)
}

/// An assignment under which the two sides differ, if one exists.
pub fn counterexample(a: &FiniteAlgebra, eq: &Equation) -> Result<Option<FinMap>> {
    check_signature(a, &eq.lhs)?;
    check_signature(a, &eq.rhs)?;
    for rho in assignments(&eq.vars, a.carrier()) {
        let env = |x: &Atom| {
            eq.vars
                .index_of(x)
                .map(|i| rho.image_index(i))
                .ok_or_else(|| Error::UnknownGenerator(x.clone()))
        };
        if a.eval_indices(&eq.lhs, &env)? != a.eval_indices(&eq.rhs, &env)? {
            return Ok(Some(rho));
        }
    }
    Ok(None)
}

/// Exhaustive over all `|carrier|^|vars|` assignments.
pub fn satisfies(a: &FiniteAlgebra, eq: &Equation) -> Result<bool> {
    Ok(counterexample(a, eq)?.is_none())
}

pub fn variety_membership(a: &FiniteAlgebra, p: &EquationalPresentation) -> Result<bool> {
    for eq in &p.equations {
        if !satisfies(a, eq)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Every tuple of indices `0..n` of the given length.
fn index_tuples(n: usize, len: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = if len == 0 {
        1
    } else {
        n.checked_pow(len as u32).unwrap_or(usize::MAX)
    };
    let total = if n == 0 && len > 0 { 0 } else { total };
    (0..total).map(move |mut code| {
        let mut t = vec![0; len];
        for slot in t.iter_mut().rev() {
            *slot = code % n;
            code /= n;
        }
        t
    })
}

fn instantiate(eq: &Equation, values: &[&Term<Atom>]) -> Relation {
    let mut sigma = |x: &Atom| values[eq.vars.index_of(x).expect("validated equation")].clone();
    (eq.lhs.substitute(&mut sigma), eq.rhs.substitute(&mut sigma))
}

/// `instance_relations`: `(σ lhs, σ rhs)` for every substitution of terms of
/// depth at most `depth` over `x`.
pub fn instance_relations(
    sig: &Signature,
    equations: &[Equation],
    x: &FinSet,
    depth: usize,
    limits: &Limits,
) -> Result<Vec<Relation>> {
    if equations.is_empty() {
        return Ok(Vec::new());
    }
    let terms = enumerate_terms(sig, x, depth, limits)?;
    let mut total = 0usize;
    for eq in equations {
        let count =
            terms
                .len()
                .checked_pow(eq.vars.len() as u32)
                .ok_or(Error::SizeCapExceeded {
                    cap: limits.node_cap,
                })?;
        total = total.saturating_add(count);
    }
    if total > limits.node_cap {
        return Err(Error::SizeCapExceeded {
            cap: limits.node_cap,
        });
    }
    let mut out = Vec::with_capacity(total);
    for eq in equations {
        for tuple in index_tuples(terms.len(), eq.vars.len()) {
            let values: Vec<&Term<Atom>> = tuple.iter().map(|&i| &terms[i]).collect();
            out.push(instantiate(eq, &values));
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Equal,
    Unknown,
}

/// Ground closure of the instances of `E` at generators `X`, truncated at
/// an instantiation depth. Merged pairs are provably equal in the theory.
#[derive(Clone, Debug)]
pub struct TheoryCongruence {
    index: CongruenceIndex,
    pub inst_depth: usize,
    pub instances_added: usize,
}

impl TheoryCongruence {
    pub fn query(&mut self, t: &Term<Atom>, u: &Term<Atom>) -> Result<Verdict> {
        Ok(if self.index.word_equal(t, u)? {
            Verdict::Equal
        } else {
            Verdict::Unknown
        })
    }

    pub fn enumerate_classes(
        &mut self,
        depth: usize,
        limits: &Limits,
    ) -> Result<Vec<CongruenceClass>> {
        self.index.enumerate_classes(depth, limits)
    }

    pub fn index(&self) -> &CongruenceIndex {
        &self.index
    }

    pub fn index_mut(&mut self) -> &mut CongruenceIndex {
        &mut self.index
    }

    pub fn into_index(self) -> CongruenceIndex {
        self.index
    }
}

/// `bounded_theory_congruence`: the closure of
/// `instance_relations(E, X, inst_depth)` (plus optional ground relations),
/// with every term of depth at most `query_depth` interned.
///
/// Instances are added only for tuples of class representatives of the
/// depth-bounded universe, level by level, until no representative tuple
/// is missing. Any other instance is congruent to a representative one, so
/// the closure equals the closure of all instances.
pub fn bounded_theory_congruence(
    sig: &Signature,
    equations: &[Equation],
    x: &FinSet,
    ground: &[Relation],
    inst_depth: usize,
    query_depth: usize,
    limits: &Limits,
) -> Result<TheoryCongruence> {
    for eq in equations {
        Equation::new(sig, eq.vars.clone(), eq.lhs.clone(), eq.rhs.clone())?;
    }
    let mut index = CongruenceIndex::new(sig.clone(), x.clone(), limits);
    for (l, r) in ground {
        index.merge(l, r)?;
    }
    let universe = if equations.is_empty() {
        Vec::new()
    } else {
        enumerate_terms(sig, x, inst_depth, limits)?
    };
    let universe_ids = universe
        .iter()
        .map(|t| index.add_term(t))
        .collect::<Result<Vec<TermId>>>()?;

    let mut added: HashSet<(usize, Vec<TermId>)> = HashSet::new();
    for level in 0..=inst_depth {
        if equations.is_empty() {
            break;
        }
        loop {
            // `universe` is sorted, so the first member of each class is least.
            let mut seen_roots = HashSet::new();
            let mut reps: Vec<(TermId, &Term<Atom>)> = Vec::new();
            for (t, &id) in universe.iter().zip(&universe_ids) {
                if t.depth() > level {
                    continue;
                }
                if seen_roots.insert(index.find(id)) {
                    reps.push((id, t));
                }
            }
            let mut fresh = 0usize;
            for (e, eq) in equations.iter().enumerate() {
                for tuple in index_tuples(reps.len(), eq.vars.len()) {
                    let key = (e, tuple.iter().map(|&i| reps[i].0).collect::<Vec<_>>());
                    if added.contains(&key) {
                        continue;
                    }
                    let values: Vec<&Term<Atom>> = tuple.iter().map(|&i| reps[i].1).collect();
                    let (l, r) = instantiate(eq, &values);
                    index.merge(&l, &r)?;
                    added.insert(key);
                    fresh += 1;
                }
            }
            if fresh == 0 {
                break;
            }
        }
    }
    let seeds = enumerate_terms(sig, x, query_depth, limits)?;
    for t in &seeds {
        index.add_term(t)?;
    }
    Ok(TheoryCongruence {
        index,
        inst_depth,
        instances_added: added.len(),
    })
}

/// `presented_monad_stage`: classes of `T_{Σ,E}X` among terms of depth at
/// most `depth`, as far as instantiation depth `inst_depth` can tell.
pub fn presented_monad_stage(
    sig: &Signature,
    equations: &[Equation],
    x: &FinSet,
    depth: usize,
    inst_depth: usize,
    limits: &Limits,
) -> Result<Vec<CongruenceClass>> {
    let mut theory = bounded_theory_congruence(sig, equations, x, &[], inst_depth, depth, limits)?;
    theory.enumerate_classes(depth, limits)
}
