//! The smallest congruence on `TX` containing a finite relation.
//!
//! [`CongruenceIndex`] is a ground congruence closure over the hash-consed
//! term DAG: a union-find on node ids, a signature table keyed on
//! `(op, canonical child ids)` and per-class parent lists for upward
//! propagation. Relations are closed under operations only, never under
//! substitution into generators.

use std::collections::HashMap;

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::finset::{Atom, FinSet};
use crate::signature::{Signature, Symbol};
use crate::term::{enumerate_terms, Node, Term, TermId, TermStore};
use crate::Limits;

pub type Relation = (Term<Atom>, Term<Atom>);

/// Generators, operations and finitely many ground relations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundPresentation {
    pub signature: Signature,
    pub generators: FinSet,
    pub relations: Vec<Relation>,
}

impl GroundPresentation {
    pub fn new(signature: Signature, generators: FinSet, relations: Vec<Relation>) -> Result<Self> {
        let p = GroundPresentation {
            signature,
            generators,
            relations,
        };
        for (l, r) in &p.relations {
            p.check_term(l)?;
            p.check_term(r)?;
        }
        Ok(p)
    }

    /// Arity and generator check.
    pub fn check_term(&self, t: &Term<Atom>) -> Result<()> {
        t.check_arities(&self.signature)?;
        match t
            .leaves()
            .into_iter()
            .find(|x| !self.generators.contains(x))
        {
            Some(x) => Err(Error::UnknownGenerator(x.clone())),
            None => Ok(()),
        }
    }

    pub fn with_relations(&self, relations: Vec<Relation>) -> Self {
        GroundPresentation {
            relations,
            ..self.clone()
        }
    }
}

/// Anything that can say whether two ground terms are identified.
pub trait TermRelation {
    fn related(&self, t: &Term<Atom>, u: &Term<Atom>) -> bool;
}

type SigKey = (Symbol, SmallVec<[u32; 2]>);

/// Incremental ground congruence closure.
#[derive(Clone, Debug)]
pub struct CongruenceIndex {
    signature: Signature,
    generators: FinSet,
    store: TermStore<Atom>,
    parent: Vec<u32>,
    rank: Vec<u8>,
    uses: Vec<Vec<TermId>>,
    table: HashMap<SigKey, TermId>,
    pending: Vec<(TermId, TermId)>,
    node_cap: usize,
}

impl CongruenceIndex {
    pub fn new(signature: Signature, generators: FinSet, limits: &Limits) -> Self {
        CongruenceIndex {
            signature,
            generators,
            store: TermStore::new(),
            parent: Vec::new(),
            rank: Vec::new(),
            uses: Vec::new(),
            table: HashMap::new(),
            pending: Vec::new(),
            node_cap: limits.node_cap,
        }
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn generators(&self) -> &FinSet {
        &self.generators
    }

    pub fn store(&self) -> &TermStore<Atom> {
        &self.store
    }

    pub fn node_count(&self) -> usize {
        self.store.len()
    }

    fn check(&self, t: &Term<Atom>) -> Result<()> {
        t.check_arities(&self.signature)?;
        match t
            .leaves()
            .into_iter()
            .find(|x| !self.generators.contains(x))
        {
            Some(x) => Err(Error::UnknownGenerator(x.clone())),
            None => Ok(()),
        }
    }

    pub fn find(&mut self, id: TermId) -> TermId {
        let mut x = id.0;
        while self.parent[x as usize] != x {
            let grand = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = grand;
            x = grand;
        }
        TermId(x)
    }

    fn find_ro(&self, id: TermId) -> TermId {
        let mut x = id.0;
        while self.parent[x as usize] != x {
            x = self.parent[x as usize];
        }
        TermId(x)
    }

    fn key_of(&mut self, id: TermId) -> Option<SigKey> {
        match self.store.node(id).clone() {
            Node::Leaf(_) => None,
            Node::App(op, kids) => Some((op, kids.iter().map(|&k| self.find(k).0).collect())),
        }
    }

    /// Interns `t` (validated against the signature and generators) and
    /// propagates any congruences it triggers.
    pub fn add_term(&mut self, t: &Term<Atom>) -> Result<TermId> {
        self.check(t)?;
        let id = self.add_unchecked(t)?;
        self.propagate();
        Ok(id)
    }

    fn add_unchecked(&mut self, t: &Term<Atom>) -> Result<TermId> {
        let node = match t {
            Term::Var(x) => Node::Leaf(x.clone()),
            Term::App(op, args) => {
                let mut kids = SmallVec::new();
                for a in args.iter() {
                    kids.push(self.add_unchecked(a)?);
                }
                Node::App(op.clone(), kids)
            }
        };
        if let Some(id) = self.store.lookup(&node) {
            return Ok(id);
        }
        if self.store.len() >= self.node_cap {
            return Err(Error::SizeCapExceeded { cap: self.node_cap });
        }
        let (id, _) = self.store.intern_node(node);
        self.parent.push(id.0);
        self.rank.push(0);
        self.uses.push(Vec::new());
        if let Some(key) = self.key_of(id) {
            let kids = key.1.clone();
            match self.table.get(&key) {
                Some(&other) => self.pending.push((id, other)),
                None => {
                    self.table.insert(key, id);
                }
            }
            let mut seen: SmallVec<[u32; 2]> = SmallVec::new();
            for k in kids {
                if !seen.contains(&k) {
                    seen.push(k);
                    self.uses[k as usize].push(id);
                }
            }
        }
        Ok(id)
    }

    /// Records `t ~ u` and closes under the congruence rule.
    pub fn merge(&mut self, t: &Term<Atom>, u: &Term<Atom>) -> Result<()> {
        self.check(t)?;
        self.check(u)?;
        let a = self.add_unchecked(t)?;
        let b = self.add_unchecked(u)?;
        self.pending.push((a, b));
        self.propagate();
        Ok(())
    }

    /// Merges two already interned nodes.
    pub fn merge_ids(&mut self, a: TermId, b: TermId) {
        self.pending.push((a, b));
        self.propagate();
    }

    fn propagate(&mut self) {
        while let Some((a, b)) = self.pending.pop() {
            let (ra, rb) = (self.find(a), self.find(b));
            if ra == rb {
                continue;
            }
            let (keep, absorb) = if self.rank[ra.index()] >= self.rank[rb.index()] {
                (ra, rb)
            } else {
                (rb, ra)
            };
            if self.rank[keep.index()] == self.rank[absorb.index()] {
                self.rank[keep.index()] += 1;
            }
            self.parent[absorb.index()] = keep.0;
            let moved = std::mem::take(&mut self.uses[absorb.index()]);
            for &u in &moved {
                let key = self
                    .key_of(u)
                    .expect("only applications are recorded as uses");
                match self.table.get(&key) {
                    Some(&w) => {
                        if self.find(w) != self.find(u) {
                            self.pending.push((u, w));
                        }
                    }
                    None => {
                        self.table.insert(key, u);
                    }
                }
            }
            self.uses[keep.index()].extend(moved);
        }
    }

    /// `word_equal`: membership of `(t, u)` in the congruence.
    pub fn word_equal(&mut self, t: &Term<Atom>, u: &Term<Atom>) -> Result<bool> {
        let a = self.add_term(t)?;
        let b = self.add_term(u)?;
        Ok(self.find(a) == self.find(b))
    }

    /// Partitions every term of depth at most `depth` into classes; the
    /// representative of a class is its least member in the term order.
    pub fn enumerate_classes(
        &mut self,
        depth: usize,
        limits: &Limits,
    ) -> Result<Vec<CongruenceClass>> {
        let terms = enumerate_terms(&self.signature, &self.generators, depth, limits)?;
        let mut ids = Vec::with_capacity(terms.len());
        for t in &terms {
            ids.push(self.add_unchecked(t)?);
        }
        self.propagate();
        Ok(self.partition(terms, &ids))
    }

    fn partition(&mut self, terms: Vec<Term<Atom>>, ids: &[TermId]) -> Vec<CongruenceClass> {
        let mut slot: HashMap<TermId, usize> = HashMap::new();
        let mut classes: Vec<CongruenceClass> = Vec::new();
        // `terms` is sorted, so the first member seen is the least.
        for (t, &id) in terms.into_iter().zip(ids) {
            let root = self.find(id);
            match slot.get(&root) {
                Some(&i) => classes[i].members.push(t),
                None => {
                    slot.insert(root, classes.len());
                    classes.push(CongruenceClass {
                        representative: t.clone(),
                        members: vec![t],
                    });
                }
            }
        }
        classes
    }

    /// Number of distinct classes among interned nodes.
    pub fn class_count(&self) -> usize {
        (0..self.parent.len())
            .filter(|&i| self.parent[i] == i as u32)
            .count()
    }

    /// Ends the build phase. The frozen index answers queries through
    /// `&self`, including for terms that were never interned.
    pub fn freeze(mut self) -> FrozenCongruence {
        self.propagate();
        let roots: Vec<u32> = (0..self.parent.len() as u32)
            .map(|i| self.find_ro(TermId(i)).0)
            .collect();
        let mut table = HashMap::with_capacity(self.table.len());
        for id in self.store.ids() {
            if let Node::App(op, kids) = self.store.node(id) {
                let key = (op.clone(), kids.iter().map(|k| roots[k.index()]).collect());
                table.insert(key, roots[id.index()]);
            }
        }
        FrozenCongruence {
            signature: self.signature,
            generators: self.generators,
            store: self.store,
            roots,
            table,
        }
    }
}

/// One congruence class restricted to a finite term universe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruenceClass {
    pub representative: Term<Atom>,
    pub members: Vec<Term<Atom>>,
}

/// `closure_build`: the closure of `P.relations`, with `seeds` interned.
pub fn closure_build(
    p: &GroundPresentation,
    seeds: &[Term<Atom>],
    limits: &Limits,
) -> Result<CongruenceIndex> {
    let mut idx = CongruenceIndex::new(p.signature.clone(), p.generators.clone(), limits);
    for (l, r) in &p.relations {
        idx.merge(l, r)?;
    }
    for t in seeds {
        idx.add_term(t)?;
    }
    Ok(idx)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum ClassKey {
    Known(u32),
    Fresh(Symbol, Vec<ClassKey>),
    FreshLeaf(Atom),
}

/// A closed, read-only congruence index.
#[derive(Clone, Debug)]
pub struct FrozenCongruence {
    signature: Signature,
    generators: FinSet,
    store: TermStore<Atom>,
    roots: Vec<u32>,
    table: HashMap<SigKey, u32>,
}

impl FrozenCongruence {
    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn generators(&self) -> &FinSet {
        &self.generators
    }

    fn key(&self, t: &Term<Atom>) -> ClassKey {
        match t {
            Term::Var(x) => match self.store.get(t) {
                Some(id) => ClassKey::Known(self.roots[id.index()]),
                None => ClassKey::FreshLeaf(x.clone()),
            },
            Term::App(op, args) => {
                let keys: Vec<ClassKey> = args.iter().map(|a| self.key(a)).collect();
                let known: Option<SmallVec<[u32; 2]>> = keys
                    .iter()
                    .map(|k| match k {
                        ClassKey::Known(r) => Some(*r),
                        _ => None,
                    })
                    .collect();
                match known.and_then(|kids| self.table.get(&(op.clone(), kids))) {
                    Some(&r) => ClassKey::Known(r),
                    None => ClassKey::Fresh(op.clone(), keys),
                }
            }
        }
    }

    pub fn equal(&self, t: &Term<Atom>, u: &Term<Atom>) -> bool {
        self.key(t) == self.key(u)
    }

    /// Class count among the interned nodes.
    pub fn class_count(&self) -> usize {
        self.roots
            .iter()
            .enumerate()
            .filter(|(i, &r)| *i as u32 == r)
            .count()
    }
}

impl TermRelation for FrozenCongruence {
    fn related(&self, t: &Term<Atom>, u: &Term<Atom>) -> bool {
        self.equal(t, u)
    }
}

/// The congruence restricted to a finite, subterm-closed universe,
/// computed by naive rule iteration to a fixpoint. Shares nothing with
/// [`CongruenceIndex`].
#[derive(Clone, Debug)]
pub struct NaiveClosure {
    universe: Vec<Term<Atom>>,
    position: HashMap<Term<Atom>, usize>,
    rows: Vec<Vec<u64>>,
    seeds: Vec<(usize, usize)>,
}

fn bit(rows: &[Vec<u64>], i: usize, j: usize) -> bool {
    rows[i][j / 64] >> (j % 64) & 1 == 1
}

fn set_bit(rows: &mut [Vec<u64>], i: usize, j: usize) -> bool {
    let was = bit(rows, i, j);
    rows[i][j / 64] |= 1 << (j % 64);
    !was
}

/// `naive_closure_oracle`: universe = terms of depth at most `depth` plus
/// all subterms of the relations.
pub fn naive_closure_oracle(
    p: &GroundPresentation,
    depth: usize,
    limits: &Limits,
) -> Result<NaiveClosure> {
    for (l, r) in &p.relations {
        p.check_term(l)?;
        p.check_term(r)?;
    }
    let mut universe = enumerate_terms(&p.signature, &p.generators, depth, limits)?;
    for (l, r) in &p.relations {
        universe.extend(l.subterms().into_iter().cloned());
        universe.extend(r.subterms().into_iter().cloned());
    }
    universe.sort();
    universe.dedup();
    let n = universe.len();
    if n > limits.node_cap || n.saturating_mul(n) / 64 > limits.node_cap.saturating_mul(64) {
        return Err(Error::SizeCapExceeded {
            cap: limits.node_cap,
        });
    }
    let position: HashMap<Term<Atom>, usize> = universe
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, t)| (t, i))
        .collect();
    let words = n.div_ceil(64);
    let mut rows = vec![vec![0u64; words]; n];
    for i in 0..n {
        set_bit(&mut rows, i, i);
    }
    let seeds: Vec<(usize, usize)> = p
        .relations
        .iter()
        .map(|(l, r)| (position[l], position[r]))
        .collect();
    for &(i, j) in &seeds {
        set_bit(&mut rows, i, j);
        set_bit(&mut rows, j, i);
    }

    // Applications grouped by operation, with argument positions.
    let mut apps: HashMap<&Symbol, Vec<(usize, Vec<usize>)>> = HashMap::new();
    for (i, t) in universe.iter().enumerate() {
        if let Term::App(op, args) = t {
            let kids = args.iter().map(|a| position[a]).collect();
            apps.entry(op).or_default().push((i, kids));
        }
    }

    loop {
        let mut changed = false;
        // Congruence rule.
        for group in apps.values() {
            for (a, (i, xs)) in group.iter().enumerate() {
                for (j, ys) in &group[a + 1..] {
                    if !bit(&rows, *i, *j) && xs.iter().zip(ys).all(|(&x, &y)| bit(&rows, x, y)) {
                        set_bit(&mut rows, *i, *j);
                        set_bit(&mut rows, *j, *i);
                        changed = true;
                    }
                }
            }
        }
        // Transitivity (the relation stays symmetric).
        for k in 0..n {
            let pivot = rows[k].clone();
            for i in 0..n {
                if i != k && bit(&rows, i, k) {
                    for (w, p) in rows[i].iter_mut().zip(&pivot) {
                        let merged = *w | p;
                        if merged != *w {
                            *w = merged;
                            changed = true;
                        }
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    Ok(NaiveClosure {
        universe,
        position,
        rows,
        seeds,
    })
}

impl NaiveClosure {
    pub fn universe(&self) -> &[Term<Atom>] {
        &self.universe
    }

    /// `None` when a term lies outside the universe.
    pub fn related(&self, t: &Term<Atom>, u: &Term<Atom>) -> Option<bool> {
        Some(bit(
            &self.rows,
            *self.position.get(t)?,
            *self.position.get(u)?,
        ))
    }

    pub fn class_count(&self) -> usize {
        (0..self.universe.len())
            .filter(|&i| (0..i).all(|j| !bit(&self.rows, i, j)))
            .count()
    }

    /// Every related pair is a relation, or follows by one transitivity or
    /// congruence step from other related pairs. A pair without such a
    /// justification would mean the fixpoint overshot the least one.
    pub fn is_locally_justified(&self) -> bool {
        let n = self.universe.len();
        let seeded = |i: usize, j: usize| {
            self.seeds
                .iter()
                .any(|&(a, b)| (a, b) == (i, j) || (a, b) == (j, i))
        };
        for i in 0..n {
            for j in (i + 1)..n {
                if !bit(&self.rows, i, j) || seeded(i, j) {
                    continue;
                }
                let congruent = match (&self.universe[i], &self.universe[j]) {
                    (Term::App(f, xs), Term::App(g, ys)) => {
                        f == g
                            && xs.len() == ys.len()
                            && xs
                                .iter()
                                .zip(ys.iter())
                                .all(|(x, y)| bit(&self.rows, self.position[x], self.position[y]))
                    }
                    _ => false,
                };
                let transitive = || {
                    (0..n)
                        .any(|k| k != i && k != j && bit(&self.rows, i, k) && bit(&self.rows, k, j))
                };
                if !congruent && !transitive() {
                    return false;
                }
            }
        }
        true
    }
}

/// Outcome of [`finite_generation_witness`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Found(Vec<Relation>),
    NotFoundWithinBound,
}

fn agrees_on(universe: &[Term<Atom>], idx: &FrozenCongruence, target: &dyn TermRelation) -> bool {
    let mut reps: Vec<&Term<Atom>> = Vec::new();
    let mut ours: Vec<usize> = Vec::with_capacity(universe.len());
    for t in universe {
        match reps.iter().position(|r| target.related(r, t)) {
            Some(i) => ours.push(i),
            None => {
                ours.push(reps.len());
                reps.push(t);
            }
        }
    }
    // Two partitions agree iff matching their blocks is a bijection.
    let mut block_of_key: HashMap<ClassKey, usize> = HashMap::new();
    let mut key_of_block: Vec<Option<ClassKey>> = vec![None; reps.len()];
    for (t, &b) in universe.iter().zip(&ours) {
        let k = idx.key(t);
        if *block_of_key.entry(k.clone()).or_insert(b) != b {
            return false;
        }
        match &key_of_block[b] {
            Some(seen) if *seen != k => return false,
            Some(_) => {}
            None => key_of_block[b] = Some(k),
        }
    }
    true
}

/// Searches `candidates` for a finite `R₀` whose closure agrees with
/// `target` on all terms of depth at most `depth`.
///
/// Candidates not identified by the target are dropped. A greedy pass in
/// order of total pair size keeps only pairs not already implied; its
/// closure equals that of all candidates, so if it disagrees with the
/// target no subset can succeed. Subsets of the greedy set are then tried
/// breadth-first by cardinality, up to `budget` closure builds, and the
/// first agreeing one is returned (the greedy set itself when the budget
/// runs out).
pub fn finite_generation_witness(
    p: &GroundPresentation,
    target: &dyn TermRelation,
    candidates: &[Relation],
    depth: usize,
    budget: usize,
    limits: &Limits,
) -> Result<Witness> {
    let universe = enumerate_terms(&p.signature, &p.generators, depth, limits)?;
    let mut pool: Vec<&Relation> = candidates
        .iter()
        .filter(|(l, r)| l != r && target.related(l, r))
        .collect();
    pool.sort_by_key(|(l, r)| (l.size() + r.size(), l.clone(), r.clone()));

    let mut greedy_idx = CongruenceIndex::new(p.signature.clone(), p.generators.clone(), limits);
    let mut greedy: Vec<Relation> = Vec::new();
    for (l, r) in pool {
        if !greedy_idx.word_equal(l, r)? {
            greedy_idx.merge(l, r)?;
            greedy.push((l.clone(), r.clone()));
        }
    }
    let build = |rels: &[Relation]| -> Result<FrozenCongruence> {
        Ok(closure_build(&p.with_relations(rels.to_vec()), &universe, limits)?.freeze())
    };
    if !agrees_on(&universe, &build(&greedy)?, target) {
        return Ok(Witness::NotFoundWithinBound);
    }

    let mut spent = 0usize;
    for k in 0..greedy.len() {
        let mut combo: Vec<usize> = (0..k).collect();
        loop {
            if spent >= budget {
                return Ok(Witness::Found(greedy));
            }
            spent += 1;
            let subset: Vec<Relation> = combo.iter().map(|&i| greedy[i].clone()).collect();
            if agrees_on(&universe, &build(&subset)?, target) {
                return Ok(Witness::Found(subset));
            }
            if !next_combination(&mut combo, greedy.len()) {
                break;
            }
        }
    }
    Ok(Witness::Found(greedy))
}

fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    for i in (0..k).rev() {
        if combo[i] < n - k + i {
            combo[i] += 1;
            for j in (i + 1)..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
