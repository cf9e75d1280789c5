//! Finite Σ-algebras, evaluation morphisms `TX -> A`, generated
//! subalgebras, kernels, image factorization, and saturation of a ground
//! presentation into its finite quotient algebra when that quotient is
//! finite.
//!
//! Strong and regular epimorphisms between algebras over `Set` are both
//! surjective homomorphisms, so one notion (surjectivity on carriers)
//! serves for either.

use std::collections::HashMap;
use std::fmt;

use crate::congruence::{closure_build, GroundPresentation, Relation, TermRelation};
use crate::error::{Error, Result};
use crate::finset::{Atom, FinMap, FinSet};
use crate::signature::Signature;
use crate::term::{enumerate_terms, Term, TermId};
use crate::Limits;

/// Mixed-radix index of an argument tuple.
fn tuple_code(args: &[usize], n: usize) -> usize {
    args.iter().fold(0, |acc, &a| acc * n + a)
}

fn tuple_of(mut code: usize, arity: usize, n: usize) -> Vec<usize> {
    let mut t = vec![0; arity];
    for slot in t.iter_mut().rev() {
        *slot = code % n;
        code /= n;
    }
    t
}

fn table_len(n: usize, arity: usize) -> usize {
    n.pow(arity as u32)
}

/// One operation's table as listed in a file: its name and `(arguments, value)` rows.
pub type OpRows = (String, Vec<(Vec<Atom>, Atom)>);

/// A finite carrier with a total table for every operation.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteAlgebra {
    signature: Signature,
    carrier: FinSet,
    /// Indexed by operation position, then by [`tuple_code`].
    tables: Vec<Vec<usize>>,
}

impl FiniteAlgebra {
    /// Tabulates `interpret(op_position, argument_indices)`.
    pub fn from_fn(
        signature: Signature,
        carrier: FinSet,
        interpret: impl Fn(usize, &[usize]) -> usize,
    ) -> Result<Self> {
        let n = carrier.len();
        let mut tables = Vec::with_capacity(signature.len());
        for (pos, (op, arity)) in signature.ops().enumerate() {
            if n == 0 && arity == 0 {
                return Err(Error::BadTable(op.to_string()));
            }
            let table: Vec<usize> = (0..table_len(n, arity))
                .map(|code| interpret(pos, &tuple_of(code, arity, n)))
                .collect();
            if table.iter().any(|&v| v >= n) {
                return Err(Error::BadTable(op.to_string()));
            }
            tables.push(table);
        }
        Ok(FiniteAlgebra {
            signature,
            carrier,
            tables,
        })
    }

    /// Builds an algebra from explicit table rows `(arguments, value)`.
    /// Every operation must be listed with a complete, consistent table.
    pub fn from_rows(signature: Signature, carrier: FinSet, rows: &[OpRows]) -> Result<Self> {
        let n = carrier.len();
        let mut tables: Vec<Option<Vec<Option<usize>>>> = vec![None; signature.len()];
        for (name, entries) in rows {
            let pos = signature
                .symbol(name)
                .and_then(|s| signature.position(s))
                .ok_or_else(|| Error::UnknownSymbol(name.clone()))?;
            let arity = signature.arity(name).unwrap();
            if tables[pos].is_some() {
                return Err(Error::DuplicateSymbol(name.clone()));
            }
            let mut table = vec![None; table_len(n, arity)];
            for (args, value) in entries {
                if args.len() != arity {
                    return Err(Error::ArityMismatch {
                        symbol: name.clone(),
                        expected: arity,
                        found: args.len(),
                    });
                }
                let idx = args
                    .iter()
                    .map(|a| {
                        carrier
                            .index_of(a)
                            .ok_or_else(|| Error::UnknownElement(a.clone()))
                    })
                    .collect::<Result<Vec<_>>>()?;
                let v = carrier
                    .index_of(value)
                    .ok_or_else(|| Error::UnknownElement(value.clone()))?;
                let slot = &mut table[tuple_code(&idx, n)];
                if slot.is_some_and(|old| old != v) {
                    return Err(Error::BadTable(name.clone()));
                }
                *slot = Some(v);
            }
            tables[pos] = Some(table);
        }
        let tables = tables
            .into_iter()
            .zip(signature.ops())
            .map(|(t, (op, _))| {
                t.and_then(|t| t.into_iter().collect::<Option<Vec<_>>>())
                    .ok_or_else(|| Error::BadTable(op.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FiniteAlgebra {
            signature,
            carrier,
            tables,
        })
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn carrier(&self) -> &FinSet {
        &self.carrier
    }

    pub fn len(&self) -> usize {
        self.carrier.len()
    }

    pub fn is_empty(&self) -> bool {
        self.carrier.is_empty()
    }

    /// Applies the operation at signature position `op` to carrier indices.
    pub fn apply(&self, op: usize, args: &[usize]) -> usize {
        self.tables[op][tuple_code(args, self.carrier.len())]
    }

    pub fn apply_named(&self, op: &str, args: &[Atom]) -> Result<Atom> {
        let sym = self
            .signature
            .symbol(op)
            .ok_or_else(|| Error::UnknownSymbol(op.into()))?;
        let pos = self.signature.position(sym).unwrap();
        let arity = self.signature.arity(op).unwrap();
        if arity != args.len() {
            return Err(Error::ArityMismatch {
                symbol: op.into(),
                expected: arity,
                found: args.len(),
            });
        }
        let idx = args
            .iter()
            .map(|a| {
                self.carrier
                    .index_of(a)
                    .ok_or_else(|| Error::UnknownElement(a.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(self.carrier.get(self.apply(pos, &idx)).unwrap().clone())
    }

    /// Folds `t` through the tables with leaves read from `env`.
    pub fn eval_indices(
        &self,
        t: &Term<Atom>,
        env: &dyn Fn(&Atom) -> Result<usize>,
    ) -> Result<usize> {
        match t {
            Term::Var(x) => env(x),
            Term::App(op, args) => {
                let pos = self
                    .signature
                    .position(op)
                    .ok_or_else(|| Error::UnknownSymbol(op.to_string()))?;
                let arity = self.signature.arity(op.as_str()).unwrap();
                if arity != args.len() {
                    return Err(Error::ArityMismatch {
                        symbol: op.to_string(),
                        expected: arity,
                        found: args.len(),
                    });
                }
                let vals = args
                    .iter()
                    .map(|a| self.eval_indices(a, env))
                    .collect::<Result<Vec<_>>>()?;
                Ok(self.apply(pos, &vals))
            }
        }
    }

    /// Every `(operation, argument indices, value index)` entry.
    pub fn entries(&self) -> impl Iterator<Item = (usize, Vec<usize>, usize)> + '_ {
        let n = self.carrier.len();
        self.signature
            .ops()
            .enumerate()
            .flat_map(move |(pos, (_, arity))| {
                (0..table_len(n, arity))
                    .map(move |code| (pos, tuple_of(code, arity, n), self.tables[pos][code]))
            })
    }
}

impl fmt::Display for FiniteAlgebra {
    /// `carrier 0 1; op g: (0,0)->0 (0,1)->0 (1,0)->0 (1,1)->1`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("carrier")?;
        for a in self.carrier.iter() {
            write!(f, " {a}")?;
        }
        for (pos, (op, arity)) in self.signature.ops().enumerate() {
            write!(f, "; op {op}:")?;
            let n = self.carrier.len();
            for code in 0..table_len(n, arity) {
                let args = tuple_of(code, arity, n);
                f.write_str(" (")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{}", self.carrier.get(*a).unwrap())?;
                }
                write!(
                    f,
                    ")->{}",
                    self.carrier.get(self.tables[pos][code]).unwrap()
                )?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for FiniteAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `evaluate(A, t, env)` with `env: X -> carrier`.
pub fn evaluate(a: &FiniteAlgebra, t: &Term<Atom>, env: &FinMap) -> Result<Atom> {
    if env.codomain() != a.carrier() {
        return Err(Error::UnknownElement(
            env.codomain()
                .iter()
                .find(|c| !a.carrier().contains(c))
                .cloned()
                .unwrap_or(Atom::Star),
        ));
    }
    let v = a.eval_indices(t, &|x| {
        env.domain()
            .index_of(x)
            .map(|i| env.image_index(i))
            .ok_or_else(|| Error::UnknownGenerator(x.clone()))
    })?;
    Ok(a.carrier().get(v).unwrap().clone())
}

/// The homomorphism `TX -> A` extending `env: X -> A`.
#[derive(Clone, Debug)]
pub struct Evaluation {
    pub algebra: FiniteAlgebra,
    pub generators: FinSet,
    /// Carrier index of each generator, in generator order.
    pub env: Vec<usize>,
}

impl Evaluation {
    pub fn new(algebra: FiniteAlgebra, env: &FinMap) -> Result<Self> {
        let env_idx = env
            .domain()
            .iter()
            .map(|x| {
                let v = env.apply(x)?;
                algebra
                    .carrier()
                    .index_of(v)
                    .ok_or_else(|| Error::UnknownElement(v.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Evaluation {
            algebra,
            generators: env.domain().clone(),
            env: env_idx,
        })
    }

    pub fn eval(&self, t: &Term<Atom>) -> Result<usize> {
        self.algebra.eval_indices(t, &|x| {
            self.generators
                .index_of(x)
                .map(|i| self.env[i])
                .ok_or_else(|| Error::UnknownGenerator(x.clone()))
        })
    }

    pub fn eval_atom(&self, t: &Term<Atom>) -> Result<Atom> {
        Ok(self.algebra.carrier().get(self.eval(t)?).unwrap().clone())
    }

    pub fn env_map(&self) -> FinMap {
        FinMap::from_indices(&self.generators, self.algebra.carrier(), self.env.clone())
    }
}

/// The kernel of the evaluation.
impl TermRelation for Evaluation {
    fn related(&self, t: &Term<Atom>, u: &Term<Atom>) -> bool {
        matches!((self.eval(t), self.eval(u)), (Ok(a), Ok(b)) if a == b)
    }
}

/// The least operation-closed subset containing `seed` (carrier indices).
pub fn subalgebra_closure_indices(a: &FiniteAlgebra, seed: &[usize]) -> Vec<bool> {
    let n = a.len();
    let mut inside = vec![false; n];
    for &s in seed {
        inside[s] = true;
    }
    loop {
        let members: Vec<usize> = (0..n).filter(|&i| inside[i]).collect();
        let mut grew = false;
        for (pos, (_, arity)) in a.signature().ops().enumerate() {
            let m = members.len();
            if arity > 0 && m == 0 {
                continue;
            }
            for code in 0..table_len(m, arity) {
                let args: Vec<usize> = tuple_of(code, arity, m)
                    .into_iter()
                    .map(|i| members[i])
                    .collect();
                let v = a.apply(pos, &args);
                if !inside[v] {
                    inside[v] = true;
                    grew = true;
                }
            }
        }
        if !grew {
            return inside;
        }
    }
}

/// `subalgebra_closure(A, M)`, in carrier order.
pub fn subalgebra_closure(a: &FiniteAlgebra, m: &FinSet) -> Result<FinSet> {
    let seed = m
        .iter()
        .map(|x| {
            a.carrier()
                .index_of(x)
                .ok_or_else(|| Error::UnknownElement(x.clone()))
        })
        .collect::<Result<Vec<_>>>()?;
    let inside = subalgebra_closure_indices(a, &seed);
    Ok(FinSet::collect(
        a.carrier()
            .iter()
            .zip(inside)
            .filter(|(_, i)| *i)
            .map(|(x, _)| x.clone()),
    ))
}

pub fn is_generated_by(a: &FiniteAlgebra, m: &FinSet) -> Result<bool> {
    Ok(subalgebra_closure(a, m)?.len() == a.len())
}

/// A surjection `TM ↠ A` together with a preimage term for every element.
#[derive(Clone, Debug)]
pub struct QuotientWitness {
    pub evaluation: Evaluation,
    /// `witnesses[i]` evaluates to carrier element `i`.
    pub witnesses: Vec<Term<Atom>>,
}

/// Exhibits `A` as a quotient of the free algebra on `M`: the evaluation
/// extending the inclusion `M -> A`, with a witness term for every element.
///
/// Witnesses are grown by rounds of term construction (round `k` yields
/// terms of depth `k`); at most `|A|` rounds are needed. Each witness is
/// re-evaluated before the result is returned.
pub fn ffp_quotient_witness(a: &FiniteAlgebra, m: &FinSet) -> Result<QuotientWitness> {
    let env = FinMap::new(m, a.carrier(), |x| x.clone())?;
    let evaluation = Evaluation::new(a.clone(), &env)?;
    let n = a.len();
    let mut found: Vec<Option<Term<Atom>>> = vec![None; n];
    for (i, x) in m.iter().enumerate() {
        let v = evaluation.env[i];
        if found[v].is_none() {
            found[v] = Some(Term::Var(x.clone()));
        }
    }
    for _ in 0..=n {
        let known: Vec<(usize, Term<Atom>)> = found
            .iter()
            .enumerate()
            .filter_map(|(i, t)| t.clone().map(|t| (i, t)))
            .collect();
        let mut grew = false;
        for (pos, (op, arity)) in a.signature().ops().enumerate() {
            let k = known.len();
            if arity > 0 && k == 0 {
                continue;
            }
            for code in 0..table_len(k, arity) {
                let picks = tuple_of(code, arity, k);
                let vals: Vec<usize> = picks.iter().map(|&i| known[i].0).collect();
                let v = a.apply(pos, &vals);
                if found[v].is_none() {
                    let args = picks.iter().map(|&i| known[i].1.clone()).collect();
                    found[v] = Some(Term::app(op.clone(), args));
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }
    let reached = found.iter().filter(|t| t.is_some()).count();
    if reached < n {
        return Err(Error::NotGenerating {
            reached,
            carrier: n,
        });
    }
    let witnesses: Vec<Term<Atom>> = found.into_iter().map(Option::unwrap).collect();
    for (i, t) in witnesses.iter().enumerate() {
        if evaluation.eval(t)? != i {
            return Err(Error::NotGenerating {
                reached: i,
                carrier: n,
            });
        }
    }
    Ok(QuotientWitness {
        evaluation,
        witnesses,
    })
}

/// Smallest generating subset, scanning subsets by increasing size and
/// then in carrier order.
pub fn smallest_generating_set(a: &FiniteAlgebra) -> FinSet {
    let n = a.len();
    for k in 0..=n {
        let mut combo: Vec<usize> = (0..k).collect();
        loop {
            if subalgebra_closure_indices(a, &combo).into_iter().all(|b| b) {
                return FinSet::collect(combo.iter().map(|&i| a.carrier().get(i).unwrap().clone()));
            }
            let mut i = k;
            let advanced = loop {
                if i == 0 {
                    break false;
                }
                i -= 1;
                if combo[i] < n - k + i {
                    combo[i] += 1;
                    for j in (i + 1)..k {
                        combo[j] = combo[j - 1] + 1;
                    }
                    break true;
                }
            };
            if !advanced {
                break;
            }
        }
    }
    a.carrier().clone()
}

/// `kernel_pairs_to_depth`: pairs `(t, u)` with `t ≤ u` in the term order,
/// both of depth at most `depth`, with equal value. Reflexive pairs are
/// included.
pub fn kernel_pairs_to_depth(
    e: &Evaluation,
    depth: usize,
    limits: &Limits,
) -> Result<Vec<Relation>> {
    let terms = enumerate_terms(e.algebra.signature(), &e.generators, depth, limits)?;
    let values = terms
        .iter()
        .map(|t| e.eval(t))
        .collect::<Result<Vec<_>>>()?;
    let mut by_value: HashMap<usize, Vec<usize>> = HashMap::new();
    for (i, v) in values.iter().enumerate() {
        by_value.entry(*v).or_default().push(i);
    }
    let total: usize = by_value.values().map(|b| b.len() * (b.len() + 1) / 2).sum();
    if total > limits.node_cap {
        return Err(Error::SizeCapExceeded {
            cap: limits.node_cap,
        });
    }
    let mut pairs = Vec::with_capacity(total);
    for i in 0..terms.len() {
        for &j in &by_value[&values[i]] {
            if j >= i {
                pairs.push((terms[i].clone(), terms[j].clone()));
            }
        }
    }
    Ok(pairs)
}

/// The finite quotient `TX/E` found by [`saturate`].
#[derive(Clone, Debug)]
pub struct Quotient {
    /// Carrier `0..n`; element `i` is the class of `representatives[i]`.
    pub algebra: FiniteAlgebra,
    pub representatives: Vec<Term<Atom>>,
    /// The quotient map `TX -> TX/E`.
    pub evaluation: Evaluation,
}

#[derive(Clone, Debug)]
#[allow(clippy::large_enum_variant)]
pub enum Saturation {
    Finite(Quotient),
    Inconclusive { classes_found: usize },
}

/// Tries to close the operation tables of `TX/E` over discovered classes.
///
/// Classes are discovered breadth-first: each round applies every operation
/// to tuples of known representatives that involve a representative from
/// the previous round, in term order. A round that discovers no new class
/// proves the quotient finite. Exceeding `max_classes` gives
/// [`Saturation::Inconclusive`].
pub fn saturate(p: &GroundPresentation, max_classes: usize, limits: &Limits) -> Result<Saturation> {
    let mut idx = closure_build(p, &[], limits)?;
    let mut reps: Vec<Term<Atom>> = Vec::new();
    let mut rep_ids: Vec<TermId> = Vec::new();
    let mut by_root: HashMap<TermId, usize> = HashMap::new();
    let mut table: HashMap<(usize, Vec<usize>), usize> = HashMap::new();

    let mut classify = |idx: &mut crate::congruence::CongruenceIndex,
                        reps: &mut Vec<Term<Atom>>,
                        rep_ids: &mut Vec<TermId>,
                        t: Term<Atom>|
     -> Result<Option<usize>> {
        let id = idx.add_term(&t)?;
        let root = idx.find(id);
        if let Some(&c) = by_root.get(&root) {
            return Ok(Some(c));
        }
        by_root.clear();
        for (i, &r) in rep_ids.iter().enumerate() {
            let root = idx.find(r);
            by_root.insert(root, i);
        }
        if let Some(&c) = by_root.get(&root) {
            return Ok(Some(c));
        }
        if reps.len() >= max_classes {
            return Ok(None);
        }
        by_root.insert(root, reps.len());
        reps.push(t);
        rep_ids.push(id);
        Ok(Some(reps.len() - 1))
    };

    let mut gen_class = Vec::with_capacity(p.generators.len());
    for x in p.generators.iter() {
        match classify(&mut idx, &mut reps, &mut rep_ids, Term::Var(x.clone()))? {
            Some(c) => gen_class.push(c),
            None => {
                return Ok(Saturation::Inconclusive {
                    classes_found: reps.len(),
                })
            }
        }
    }

    let mut done = 0usize;
    let mut first_round = true;
    loop {
        let start = reps.len();
        let mut candidates: Vec<(Term<Atom>, usize, Vec<usize>)> = Vec::new();
        for (pos, (op, arity)) in p.signature.ops().enumerate() {
            if arity == 0 {
                if first_round {
                    candidates.push((Term::constant(op.clone()), pos, Vec::new()));
                }
                continue;
            }
            for code in 0..table_len(start, arity) {
                let args = tuple_of(code, arity, start);
                if args.iter().all(|&a| a < done) {
                    continue;
                }
                let term = Term::app(op.clone(), args.iter().map(|&a| reps[a].clone()).collect());
                candidates.push((term, pos, args));
            }
        }
        candidates.sort_by(|a, b| a.0.cmp(&b.0));
        for (term, pos, args) in candidates {
            match classify(&mut idx, &mut reps, &mut rep_ids, term)? {
                Some(c) => {
                    table.insert((pos, args), c);
                }
                None => {
                    return Ok(Saturation::Inconclusive {
                        classes_found: reps.len(),
                    })
                }
            }
        }
        first_round = false;
        done = start;
        if reps.len() == start {
            break;
        }
    }

    let carrier = FinSet::range(reps.len());
    let algebra = FiniteAlgebra::from_fn(p.signature.clone(), carrier, |pos, args| {
        table[&(pos, args.to_vec())]
    })?;
    let evaluation = Evaluation {
        algebra: algebra.clone(),
        generators: p.generators.clone(),
        env: gen_class,
    };
    Ok(Saturation::Finite(Quotient {
        algebra,
        representatives: reps,
        evaluation,
    }))
}

/// A map between finite algebras over one signature.
#[derive(Clone, Debug)]
pub struct AlgebraMorphism {
    pub source: FiniteAlgebra,
    pub target: FiniteAlgebra,
    /// Target index of each source element.
    pub map: Vec<usize>,
}

impl AlgebraMorphism {
    /// Wraps a carrier map without checking the homomorphism law.
    pub fn new(source: FiniteAlgebra, target: FiniteAlgebra, map: &FinMap) -> Result<Self> {
        if map.domain() != source.carrier() || map.codomain() != target.carrier() {
            return Err(Error::NotHomomorphism {
                op: "(carrier)".into(),
                at: "domain or codomain".into(),
            });
        }
        let map = (0..source.len()).map(|i| map.image_index(i)).collect();
        Ok(AlgebraMorphism {
            source,
            target,
            map,
        })
    }

    pub fn identity(a: &FiniteAlgebra) -> Self {
        AlgebraMorphism {
            source: a.clone(),
            target: a.clone(),
            map: (0..a.len()).collect(),
        }
    }

    /// The first table entry where the law fails, if any.
    pub fn violation(&self) -> Option<(String, String)> {
        if self.source.signature() != self.target.signature() {
            return Some(("(signature)".into(), "signatures differ".into()));
        }
        for (pos, args, v) in self.source.entries() {
            let mapped: Vec<usize> = args.iter().map(|&a| self.map[a]).collect();
            if self.target.apply(pos, &mapped) != self.map[v] {
                let op = self
                    .source
                    .signature()
                    .ops()
                    .nth(pos)
                    .unwrap()
                    .0
                    .to_string();
                let at = args
                    .iter()
                    .map(|&a| self.source.carrier().get(a).unwrap().to_string())
                    .collect::<Vec<_>>()
                    .join(",");
                return Some((op, format!("({at})")));
            }
        }
        None
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target.len()];
        self.map
            .iter()
            .all(|&j| !std::mem::replace(&mut seen[j], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.target.len()];
        self.map.iter().for_each(|&j| seen[j] = true);
        seen.into_iter().all(|b| b)
    }

    /// `then ∘ self`.
    pub fn then(&self, then: &AlgebraMorphism) -> AlgebraMorphism {
        AlgebraMorphism {
            source: self.source.clone(),
            target: then.target.clone(),
            map: self.map.iter().map(|&i| then.map[i]).collect(),
        }
    }
}

/// `check_homomorphism`: exhaustive over every table entry.
pub fn check_homomorphism(h: &AlgebraMorphism) -> bool {
    h.violation().is_none()
}

/// Splits `h` as a surjection onto its image followed by the inclusion.
pub fn image_factorization(h: &AlgebraMorphism) -> Result<(AlgebraMorphism, AlgebraMorphism)> {
    if let Some((op, at)) = h.violation() {
        return Err(Error::NotHomomorphism { op, at });
    }
    let mut hit = vec![false; h.target.len()];
    h.map.iter().for_each(|&j| hit[j] = true);
    let members: Vec<usize> = (0..h.target.len()).filter(|&j| hit[j]).collect();
    let slot: HashMap<usize, usize> = members.iter().enumerate().map(|(i, &j)| (j, i)).collect();
    let carrier = FinSet::collect(
        members
            .iter()
            .map(|&j| h.target.carrier().get(j).unwrap().clone()),
    );
    let image = FiniteAlgebra::from_fn(h.target.signature().clone(), carrier, |pos, args| {
        let outer: Vec<usize> = args.iter().map(|&i| members[i]).collect();
        slot[&h.target.apply(pos, &outer)]
    })?;
    let e = AlgebraMorphism {
        source: h.source.clone(),
        target: image.clone(),
        map: h.map.iter().map(|j| slot[j]).collect(),
    };
    let m = AlgebraMorphism {
        source: image,
        target: h.target.clone(),
        map: members,
    };
    Ok((e, m))
}
