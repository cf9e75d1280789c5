//! Monoids, finitary monads on finite sets, and the adjunction between them.
//!
//! A monoid `M` gives the monad of free `M`-sets, `X ↦ M × X`. A monad `T`
//! gives the monoid `T1` whose product is computed through the canonical
//! strength. Both directions, the unit `ν` and counit `ε` and every
//! coherence law are checked pointwise on small sets.

use std::cell::RefCell;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::equational::{bounded_theory_congruence, Equation, TheoryCongruence, Verdict};
use crate::error::{Error, Result};
use crate::finset::{Atom, FinMap, FinSet};
use crate::signature::Signature;
use crate::term::{enumerate_terms, Term};
use crate::Limits;

/// A finite monoid with its laws checked at construction.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteMonoid {
    carrier: FinSet,
    unit: usize,
    table: Vec<usize>,
}

impl FiniteMonoid {
    /// Validates a row-major table over `carrier` with identity `unit`.
    pub fn from_indices(carrier: FinSet, unit: usize, table: Vec<usize>) -> Result<Self> {
        let n = carrier.len();
        if n == 0 {
            return Err(Error::NotAMonoid("empty carrier".into()));
        }
        if unit >= n || table.len() != n * n || table.iter().any(|&v| v >= n) {
            return Err(Error::NotAMonoid("table does not fit the carrier".into()));
        }
        let m = |a: usize, b: usize| table[a * n + b];
        let name = |i: usize| carrier.get(i).unwrap().to_string();
        for a in 0..n {
            if m(unit, a) != a || m(a, unit) != a {
                return Err(Error::NotAMonoid(format!(
                    "{} is not a two-sided unit at {}",
                    name(unit),
                    name(a)
                )));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if m(m(a, b), c) != m(a, m(b, c)) {
                        return Err(Error::NotAMonoid(format!(
                            "not associative at ({}, {}, {})",
                            name(a),
                            name(b),
                            name(c)
                        )));
                    }
                }
            }
        }
        Ok(FiniteMonoid {
            carrier,
            unit,
            table,
        })
    }

    pub fn from_fn(
        carrier: FinSet,
        unit: &Atom,
        mult: impl Fn(&Atom, &Atom) -> Atom,
    ) -> Result<Self> {
        let e = carrier
            .index_of(unit)
            .ok_or_else(|| Error::NotAMonoid(format!("unit {unit} is not in the carrier")))?;
        let mut table = Vec::with_capacity(carrier.len() * carrier.len());
        for a in carrier.iter() {
            for b in carrier.iter() {
                let c = mult(a, b);
                table.push(
                    carrier.index_of(&c).ok_or_else(|| {
                        Error::NotAMonoid(format!("product {c} leaves the carrier"))
                    })?,
                );
            }
        }
        Self::from_indices(carrier, e, table)
    }

    pub fn trivial() -> Self {
        Self::from_indices(FinSet::range(1), 0, vec![0]).unwrap()
    }

    /// `(ℤ_n, +, 0)`.
    pub fn cyclic(n: usize) -> Self {
        let table = (0..n * n).map(|k| (k / n + k % n) % n).collect();
        Self::from_indices(FinSet::range(n), 0, table).unwrap()
    }

    /// `({0,1}, ∧, 1)`.
    pub fn boolean_and() -> Self {
        Self::from_indices(FinSet::range(2), 1, vec![0, 0, 0, 1]).unwrap()
    }

    /// `({0..n-1}, max, 0)`.
    pub fn max_chain(n: usize) -> Self {
        let table = (0..n * n).map(|k| (k / n).max(k % n)).collect();
        Self::from_indices(FinSet::range(n), 0, table).unwrap()
    }

    /// `ℤ_2 × ℤ_2`.
    pub fn klein() -> Self {
        let table = (0..16).map(|k| (k / 4) ^ (k % 4)).collect();
        Self::from_indices(FinSet::range(4), 0, table).unwrap()
    }

    /// `n` left zeros with an identity adjoined as element `0`.
    pub fn left_zeros_with_unit(n: usize) -> Self {
        let k = n + 1;
        let table = (0..k * k)
            .map(|i| match (i / k, i % k) {
                (0, b) => b,
                (a, _) => a,
            })
            .collect();
        Self::from_indices(FinSet::range(k), 0, table).unwrap()
    }

    pub fn carrier(&self) -> &FinSet {
        &self.carrier
    }

    pub fn len(&self) -> usize {
        self.carrier.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn unit_index(&self) -> usize {
        self.unit
    }

    pub fn unit(&self) -> &Atom {
        self.carrier.get(self.unit).unwrap()
    }

    pub fn mult(&self, a: usize, b: usize) -> usize {
        self.table[a * self.len() + b]
    }

    pub fn mult_atoms(&self, a: &Atom, b: &Atom) -> Result<Atom> {
        let i = self
            .carrier
            .index_of(a)
            .ok_or_else(|| Error::UnknownElement(a.clone()))?;
        let j = self
            .carrier
            .index_of(b)
            .ok_or_else(|| Error::UnknownElement(b.clone()))?;
        Ok(self.carrier.get(self.mult(i, j)).unwrap().clone())
    }

    /// The same monoid with elements renamed `0..n-1` in carrier order.
    pub fn relabel(&self) -> FiniteMonoid {
        FiniteMonoid {
            carrier: FinSet::range(self.len()),
            unit: self.unit,
            table: self.table.clone(),
        }
    }

    /// A bijection `self → other` preserving unit and product, if any.
    pub fn isomorphism_to(&self, other: &FiniteMonoid) -> Option<Vec<usize>> {
        let n = self.len();
        if n != other.len() {
            return None;
        }
        let mut perm: Vec<usize> = (0..n).collect();
        loop {
            if perm[self.unit] == other.unit
                && (0..n)
                    .all(|a| (0..n).all(|b| perm[self.mult(a, b)] == other.mult(perm[a], perm[b])))
            {
                return Some(perm);
            }
            if !next_permutation(&mut perm) {
                return None;
            }
        }
    }

    /// Row-major product table over carrier indices.
    pub fn table(&self) -> &[usize] {
        &self.table
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

impl fmt::Display for FiniteMonoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "monoid carrier")?;
        for a in self.carrier.iter() {
            write!(f, " {a}")?;
        }
        write!(f, "; unit {}; mult", self.unit())?;
        for (i, a) in self.carrier.iter().enumerate() {
            for (j, b) in self.carrier.iter().enumerate() {
                write!(
                    f,
                    " ({a},{b})->{}",
                    self.carrier.get(self.mult(i, j)).unwrap()
                )?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for FiniteMonoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for FiniteMonoid {
    type Err = Error;

    /// Reads the one-line form printed by `Display`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |m: &str| Error::NotAMonoid(m.to_string());
        let mut parts = s.split(';').map(str::trim);
        let head = parts.next().unwrap_or_default();
        let labels = head
            .strip_prefix("monoid")
            .map(str::trim_start)
            .and_then(|h| h.strip_prefix("carrier"))
            .ok_or_else(|| bad("expected `monoid carrier ...`"))?;
        let carrier = FinSet::new(labels.split_whitespace().map(Atom::name))?;
        let unit = parts
            .next()
            .and_then(|p| p.strip_prefix("unit"))
            .map(str::trim)
            .ok_or_else(|| bad("expected `unit <element>`"))?;
        let entries = parts
            .next()
            .and_then(|p| p.strip_prefix("mult"))
            .ok_or_else(|| bad("expected `mult ...`"))?;
        if parts.next().is_some() {
            return Err(bad("trailing input"));
        }
        let mut rows = Vec::new();
        for entry in entries.split_whitespace() {
            let (args, value) = entry
                .split_once("->")
                .ok_or_else(|| bad("expected `(a,b)->c`"))?;
            let (a, b) = args
                .strip_prefix('(')
                .and_then(|x| x.strip_suffix(')'))
                .and_then(|x| x.split_once(','))
                .ok_or_else(|| bad("expected `(a,b)->c`"))?;
            rows.push((a.to_string(), b.to_string(), value.to_string()));
        }
        monoid_from_rows(carrier, unit, &rows)
    }
}

/// Builds a monoid from `(a, b, a·b)` label triples covering every pair once.
pub fn monoid_from_rows(
    carrier: FinSet,
    unit: &str,
    rows: &[(String, String, String)],
) -> Result<FiniteMonoid> {
    let n = carrier.len();
    let idx = |l: &str| {
        carrier
            .index_of(&Atom::name(l))
            .ok_or_else(|| Error::NotAMonoid(format!("unknown element {l}")))
    };
    let mut table = vec![None; n * n];
    for (a, b, c) in rows {
        let slot = &mut table[idx(a)? * n + idx(b)?];
        if slot.replace(idx(c)?).is_some() {
            return Err(Error::NotAMonoid(format!("({a},{b}) given twice")));
        }
    }
    let table = table
        .into_iter()
        .enumerate()
        .map(|(k, v)| {
            v.ok_or_else(|| {
                Error::NotAMonoid(format!(
                    "missing ({},{})",
                    carrier.get(k / n).unwrap(),
                    carrier.get(k % n).unwrap()
                ))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let e = idx(unit)?;
    FiniteMonoid::from_indices(carrier, e, table)
}

/// Every monoid of order `n` up to isomorphism, unit labelled `0`.
pub fn monoids_of_order(n: usize) -> Vec<FiniteMonoid> {
    if n == 0 {
        return Vec::new();
    }
    let free: Vec<(usize, usize)> = (1..n).flat_map(|a| (1..n).map(move |b| (a, b))).collect();
    let mut table = vec![0usize; n * n];
    for a in 0..n {
        table[a] = a;
        table[a * n] = a;
    }
    let total = n.pow(free.len() as u32);
    let perms: Vec<Vec<usize>> = {
        let mut rest: Vec<usize> = (1..n).collect();
        let mut out = Vec::new();
        loop {
            let mut p = vec![0];
            p.extend(&rest);
            out.push(p);
            if !next_permutation(&mut rest) {
                break;
            }
        }
        out
    };
    let mut seen = BTreeSet::new();
    let mut found = Vec::new();
    for mut code in 0..total {
        for &(a, b) in &free {
            table[a * n + b] = code % n;
            code /= n;
        }
        let m = |a: usize, b: usize| table[a * n + b];
        let assoc = (1..n).all(|a| (1..n).all(|b| (1..n).all(|c| m(m(a, b), c) == m(a, m(b, c)))));
        if !assoc {
            continue;
        }
        let canonical = perms
            .iter()
            .map(|p| {
                let mut t = vec![0; n * n];
                for a in 0..n {
                    for b in 0..n {
                        t[p[a] * n + p[b]] = p[m(a, b)];
                    }
                }
                t
            })
            .min()
            .unwrap();
        if seen.insert(canonical.clone()) {
            found.push(FiniteMonoid::from_indices(FinSet::range(n), 0, canonical).unwrap());
        }
    }
    found
}

/// Monoids of order at most 4 up to isomorphism, followed by a few of order 5.
pub fn monoid_corpus() -> Vec<FiniteMonoid> {
    let mut out: Vec<FiniteMonoid> = (1..=4).flat_map(monoids_of_order).collect();
    out.push(FiniteMonoid::cyclic(5));
    out.push(FiniteMonoid::max_chain(5));
    out.push(FiniteMonoid::left_zeros_with_unit(4));
    out
}

/// A map of finite sets given as a fallible function on atoms.
pub type AtomFn<'a> = &'a dyn Fn(&Atom) -> Result<Atom>;

/// The finite-set behaviour of a finitary monad on `Set`.
///
/// Elements of `TX` are atoms; elements of `TTX` are atoms whose leaves are
/// elements of `TX`.
pub trait Monad {
    fn name(&self) -> String;

    /// `TX` in full, when it is finite and fits the cap.
    fn carrier(&self, x: &FinSet, limits: &Limits) -> Result<FinSet>;

    /// The part of `TX` that law sweeps run over. Equal to the carrier for
    /// finite monads; a depth-bounded part otherwise.
    fn elements(&self, x: &FinSet, limits: &Limits) -> Result<Vec<Atom>> {
        Ok(self.carrier(x, limits)?.iter().cloned().collect())
    }

    /// `Tf`.
    fn act(&self, f: AtomFn, t: &Atom) -> Result<Atom>;

    /// `η_X(x)`.
    fn unit(&self, x: &Atom) -> Atom;

    /// `μ_X`.
    fn mult(&self, tt: &Atom) -> Result<Atom>;

    /// A random `T`-structure whose leaves come from `leaf`.
    fn random_over(
        &self,
        leaf: &mut dyn FnMut(&mut dyn RngCore) -> Atom,
        rng: &mut dyn RngCore,
    ) -> Atom;

    /// Equality of elements of `TX`.
    fn equivalent(&self, a: &Atom, b: &Atom) -> Result<bool> {
        Ok(a == b)
    }
}

fn split_pair(a: &Atom) -> Result<(&Atom, &Atom)> {
    a.as_pair().ok_or_else(|| Error::UnknownElement(a.clone()))
}

fn as_term(a: &Atom) -> Result<&Term<Atom>> {
    a.as_term().ok_or_else(|| Error::UnknownElement(a.clone()))
}

/// `X ↦ X`.
#[derive(Clone, Copy, Debug, Default)]
pub struct IdentityMonad;

impl Monad for IdentityMonad {
    fn name(&self) -> String {
        "identity".into()
    }

    fn carrier(&self, x: &FinSet, _: &Limits) -> Result<FinSet> {
        Ok(x.clone())
    }

    fn act(&self, f: AtomFn, t: &Atom) -> Result<Atom> {
        f(t)
    }

    fn unit(&self, x: &Atom) -> Atom {
        x.clone()
    }

    fn mult(&self, tt: &Atom) -> Result<Atom> {
        Ok(tt.clone())
    }

    fn random_over(
        &self,
        leaf: &mut dyn FnMut(&mut dyn RngCore) -> Atom,
        rng: &mut dyn RngCore,
    ) -> Atom {
        leaf(rng)
    }
}

/// Finite subsets: direct image, singleton, union.
#[derive(Clone, Copy, Debug, Default)]
pub struct FinitePowerset;

impl Monad for FinitePowerset {
    fn name(&self) -> String {
        "powerset".into()
    }

    /// Subsets in bitmask order, so `∅` comes first and `X` last.
    fn carrier(&self, x: &FinSet, limits: &Limits) -> Result<FinSet> {
        let n = x.len();
        if n >= usize::BITS as usize - 1 || (1usize << n) > limits.node_cap {
            return Err(Error::SizeCapExceeded {
                cap: limits.node_cap,
            });
        }
        Ok(FinSet::collect((0..1usize << n).map(|mask| {
            Atom::set(
                x.iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, a)| a.clone()),
            )
        })))
    }

    fn act(&self, f: AtomFn, t: &Atom) -> Result<Atom> {
        let s = t.as_set().ok_or_else(|| Error::UnknownElement(t.clone()))?;
        Ok(Atom::set(s.iter().map(f).collect::<Result<Vec<_>>>()?))
    }

    fn unit(&self, x: &Atom) -> Atom {
        Atom::set([x.clone()])
    }

    fn mult(&self, tt: &Atom) -> Result<Atom> {
        let outer = tt
            .as_set()
            .ok_or_else(|| Error::UnknownElement(tt.clone()))?;
        let mut all = Vec::new();
        for inner in outer.iter() {
            all.extend(
                inner
                    .as_set()
                    .ok_or_else(|| Error::UnknownElement(inner.clone()))?
                    .iter()
                    .cloned(),
            );
        }
        Ok(Atom::set(all))
    }

    fn random_over(
        &self,
        leaf: &mut dyn FnMut(&mut dyn RngCore) -> Atom,
        rng: &mut dyn RngCore,
    ) -> Atom {
        let k = rng.gen_range(0..=3);
        Atom::set((0..k).map(|_| leaf(rng)).collect::<Vec<_>>())
    }
}

/// The monad `L M = M × (−)` of free `M`-sets.
#[derive(Clone, Debug)]
pub struct FreeMSet {
    monoid: FiniteMonoid,
}

impl FreeMSet {
    pub fn monoid(&self) -> &FiniteMonoid {
        &self.monoid
    }
}

/// `monad_from_monoid`: `η(x) = (1, x)` and `μ(n, (m, x)) = (n·m, x)`.
pub fn monad_from_monoid(m: &FiniteMonoid) -> FreeMSet {
    FreeMSet { monoid: m.clone() }
}

impl Monad for FreeMSet {
    fn name(&self) -> String {
        format!("free-mset({})", self.monoid)
    }

    fn carrier(&self, x: &FinSet, limits: &Limits) -> Result<FinSet> {
        if self.monoid.len().saturating_mul(x.len()) > limits.node_cap {
            return Err(Error::SizeCapExceeded {
                cap: limits.node_cap,
            });
        }
        Ok(self.monoid.carrier().product(x))
    }

    fn act(&self, f: AtomFn, t: &Atom) -> Result<Atom> {
        let (m, x) = split_pair(t)?;
        Ok(Atom::pair(m.clone(), f(x)?))
    }

    fn unit(&self, x: &Atom) -> Atom {
        Atom::pair(self.monoid.unit().clone(), x.clone())
    }

    fn mult(&self, tt: &Atom) -> Result<Atom> {
        let (n, inner) = split_pair(tt)?;
        let (m, x) = split_pair(inner)?;
        Ok(Atom::pair(self.monoid.mult_atoms(n, m)?, x.clone()))
    }

    fn random_over(
        &self,
        leaf: &mut dyn FnMut(&mut dyn RngCore) -> Atom,
        rng: &mut dyn RngCore,
    ) -> Atom {
        let m = self
            .monoid
            .carrier()
            .get(rng.gen_range(0..self.monoid.len()))
            .unwrap()
            .clone();
        Atom::pair(m, leaf(rng))
    }
}

/// The free monad on a signature. Its carriers are infinite, so sweeps use
/// the terms of depth at most `depth`.
#[derive(Clone, Debug)]
pub struct TermMonad {
    pub signature: Signature,
    pub depth: usize,
}

impl TermMonad {
    pub fn new(signature: Signature, depth: usize) -> Self {
        TermMonad { signature, depth }
    }

    fn random_term(
        &self,
        depth: usize,
        leaf: &mut dyn FnMut(&mut dyn RngCore) -> Atom,
        rng: &mut dyn RngCore,
    ) -> Term<Atom> {
        if depth == 0 || self.signature.is_empty() || rng.gen_bool(0.35) {
            return Term::Var(leaf(rng));
        }
        let (op, arity) = self
            .signature
            .ops()
            .nth(rng.gen_range(0..self.signature.len()))
            .unwrap();
        let args = (0..arity)
            .map(|_| self.random_term(depth - 1, leaf, rng))
            .collect();
        Term::app(op.clone(), args)
    }
}

impl Monad for TermMonad {
    fn name(&self) -> String {
        format!("terms({})", self.signature)
    }

    fn carrier(&self, _: &FinSet, _: &Limits) -> Result<FinSet> {
        Err(Error::CarrierNotMaterializable(format!(
            "terms over {}",
            self.signature
        )))
    }

    fn elements(&self, x: &FinSet, limits: &Limits) -> Result<Vec<Atom>> {
        Ok(enumerate_terms(&self.signature, x, self.depth, limits)?
            .into_iter()
            .map(Atom::term)
            .collect())
    }

    fn act(&self, f: AtomFn, t: &Atom) -> Result<Atom> {
        Ok(Atom::term(as_term(t)?.try_map_vars(&mut |x| f(x))?))
    }

    fn unit(&self, x: &Atom) -> Atom {
        Atom::term(Term::Var(x.clone()))
    }

    fn mult(&self, tt: &Atom) -> Result<Atom> {
        Ok(Atom::term(
            as_term(tt)?.try_substitute(&mut |leaf| as_term(leaf).cloned())?,
        ))
    }

    fn random_over(
        &self,
        leaf: &mut dyn FnMut(&mut dyn RngCore) -> Atom,
        rng: &mut dyn RngCore,
    ) -> Atom {
        Atom::term(self.random_term(2, leaf, rng))
    }
}

/// The monad presented by a signature and equations, seen through bounded
/// theory congruences: terms are compared by provable equality.
pub struct PresentedMonad {
    terms: TermMonad,
    equations: Vec<Equation>,
    inst_depth: usize,
    limits: Limits,
    theories: RefCell<HashMap<Vec<Atom>, TheoryCongruence>>,
}

impl PresentedMonad {
    pub fn new(
        signature: Signature,
        equations: Vec<Equation>,
        depth: usize,
        inst_depth: usize,
        limits: Limits,
    ) -> Result<Self> {
        for eq in &equations {
            Equation::new(&signature, eq.vars.clone(), eq.lhs.clone(), eq.rhs.clone())?;
        }
        Ok(PresentedMonad {
            terms: TermMonad::new(signature, depth),
            equations,
            inst_depth,
            limits,
            theories: RefCell::new(HashMap::new()),
        })
    }

    pub fn signature(&self) -> &Signature {
        &self.terms.signature
    }

    fn with_theory<R>(
        &self,
        gens: &FinSet,
        f: impl FnOnce(&mut TheoryCongruence) -> Result<R>,
    ) -> Result<R> {
        let key: Vec<Atom> = gens.iter().cloned().collect();
        let mut cache = self.theories.borrow_mut();
        if !cache.contains_key(&key) {
            let th = bounded_theory_congruence(
                self.signature(),
                &self.equations,
                gens,
                &[],
                self.inst_depth,
                0,
                &self.limits,
            )?;
            cache.insert(key.clone(), th);
        }
        f(cache.get_mut(&key).unwrap())
    }

    /// One representative per class among the depth-bounded terms over `x`.
    pub fn classes(&self, x: &FinSet) -> Result<Vec<Term<Atom>>> {
        let depth = self.terms.depth;
        let limits = self.limits;
        self.with_theory(x, |th| {
            Ok(th
                .enumerate_classes(depth, &limits)?
                .into_iter()
                .map(|c| c.representative)
                .collect())
        })
    }

    /// The bounded part of the induced monoid `T1`: classes of terms over
    /// `{*}` of depth at most `depth`, multiplied by substituting the second
    /// factor for every `*` in the first.
    pub fn bounded_induced_monoid(&self, depth: usize) -> Result<BoundedMonoid> {
        let one = FinSet::unit();
        let mut th = bounded_theory_congruence(
            self.signature(),
            &self.equations,
            &one,
            &[],
            self.inst_depth,
            depth,
            &self.limits,
        )?;
        let classes = th.enumerate_classes(depth, &self.limits)?;
        let index = th.index_mut();
        let mut root_of_class = HashMap::new();
        let mut representatives = Vec::with_capacity(classes.len());
        for (i, c) in classes.iter().enumerate() {
            let id = index.add_term(&c.representative)?;
            root_of_class.insert(index.find(id), i);
            representatives.push(c.representative.clone());
        }
        let classify = |index: &mut crate::congruence::CongruenceIndex,
                        t: &Term<Atom>|
         -> Result<Option<usize>> {
            let id = index.add_term(t)?;
            Ok(root_of_class.get(&index.find(id)).copied())
        };
        let unit = classify(index, &Term::Var(Atom::Star))?.ok_or_else(|| {
            Error::CarrierNotMaterializable("the depth-bounded induced monoid".into())
        })?;
        let n = representatives.len();
        let mut table = vec![None; n * n];
        for (i, a) in representatives.iter().enumerate() {
            for (j, b) in representatives.iter().enumerate() {
                let product =
                    induced_product(&self.terms, &Atom::term(a.clone()), &Atom::term(b.clone()))?;
                table[i * n + j] = classify(index, as_term(&product)?)?;
            }
        }
        Ok(BoundedMonoid {
            representatives,
            unit,
            table,
        })
    }
}

impl Monad for PresentedMonad {
    fn name(&self) -> String {
        format!(
            "presented({}, {} equations)",
            self.signature(),
            self.equations.len()
        )
    }

    fn carrier(&self, x: &FinSet, limits: &Limits) -> Result<FinSet> {
        self.terms.carrier(x, limits)
    }

    /// Depth-bounded terms; sweeps compare them by provable equality.
    fn elements(&self, x: &FinSet, limits: &Limits) -> Result<Vec<Atom>> {
        self.terms.elements(x, limits)
    }

    fn act(&self, f: AtomFn, t: &Atom) -> Result<Atom> {
        self.terms.act(f, t)
    }

    fn unit(&self, x: &Atom) -> Atom {
        self.terms.unit(x)
    }

    fn mult(&self, tt: &Atom) -> Result<Atom> {
        self.terms.mult(tt)
    }

    fn random_over(
        &self,
        leaf: &mut dyn FnMut(&mut dyn RngCore) -> Atom,
        rng: &mut dyn RngCore,
    ) -> Atom {
        self.terms.random_over(leaf, rng)
    }

    /// Provable equality; `false` means "not shown equal within the bound".
    fn equivalent(&self, a: &Atom, b: &Atom) -> Result<bool> {
        if a == b {
            return Ok(true);
        }
        let (s, t) = (as_term(a)?, as_term(b)?);
        let mut leaves: Vec<Atom> = s.leaves().into_iter().chain(t.leaves()).cloned().collect();
        leaves.sort();
        leaves.dedup();
        self.with_theory(&FinSet::collect(leaves), |th| {
            Ok(th.query(s, t)? == Verdict::Equal)
        })
    }
}

/// A monoid known only on finitely many classes; `None` marks products
/// that fall outside the enumerated part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundedMonoid {
    pub representatives: Vec<Term<Atom>>,
    pub unit: usize,
    pub table: Vec<Option<usize>>,
}

impl BoundedMonoid {
    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }

    pub fn mult(&self, a: usize, b: usize) -> Option<usize> {
        self.table[a * self.len() + b]
    }

    /// Unit and associativity wherever every product involved is known.
    pub fn laws_hold_where_defined(&self) -> bool {
        let n = self.len();
        let units = (0..n)
            .all(|a| self.mult(self.unit, a) == Some(a) && self.mult(a, self.unit) == Some(a));
        let assoc = (0..n).all(|a| {
            (0..n).all(|b| {
                (0..n).all(|c| {
                    match (
                        self.mult(a, b).and_then(|ab| self.mult(ab, c)),
                        self.mult(b, c).and_then(|bc| self.mult(a, bc)),
                    ) {
                        (Some(l), Some(r)) => l == r,
                        _ => true,
                    }
                })
            })
        });
        units && assoc
    }
}

/// `s_{X,Y}(t, y) = T(x ↦ (x, y))(t)`.
pub fn canonical_strength(t: &dyn Monad, elem: &Atom, y: &Atom) -> Result<Atom> {
    t.act(&|x| Ok(Atom::pair(x.clone(), y.clone())), elem)
}

/// The strength tabulated as a map `TX × Y → T(X × Y)`.
pub fn strength_map(t: &dyn Monad, x: &FinSet, y: &FinSet, limits: &Limits) -> Result<FinMap> {
    let tx = t.carrier(x, limits)?;
    let domain = tx.product(y);
    let codomain = t.carrier(&x.product(y), limits)?;
    let images = domain
        .iter()
        .map(|p| {
            let (a, b) = split_pair(p)?;
            let img = canonical_strength(t, a, b)?;
            codomain.index_of(&img).ok_or(Error::UnknownElement(img))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FinMap::from_indices(&domain, &codomain, images))
}

/// `X × 1 ≅ X`.
pub fn drop_right_unit(p: &Atom) -> Result<Atom> {
    match split_pair(p)? {
        (x, Atom::Star) => Ok(x.clone()),
        _ => Err(Error::UnknownElement(p.clone())),
    }
}

/// `1 × X ≅ X`.
pub fn drop_left_unit(p: &Atom) -> Result<Atom> {
    match split_pair(p)? {
        (Atom::Star, x) => Ok(x.clone()),
        _ => Err(Error::UnknownElement(p.clone())),
    }
}

/// `μ_1 ∘ T(1 × T1 ≅ T1) ∘ s_{1,T1}` applied to `(a, b)`.
pub fn induced_product(t: &dyn Monad, a: &Atom, b: &Atom) -> Result<Atom> {
    let strengthened = canonical_strength(t, a, b)?;
    let nested = t.act(&drop_left_unit, &strengthened)?;
    t.mult(&nested)
}

/// `monoid_from_monad`: the monoid `T1` with unit `η(*)`.
pub fn monoid_from_monad(t: &dyn Monad, limits: &Limits) -> Result<FiniteMonoid> {
    let one = t.carrier(&FinSet::unit(), limits)?;
    let unit = t.unit(&Atom::Star);
    let mut table = Vec::with_capacity(one.len() * one.len());
    for a in one.iter() {
        for b in one.iter() {
            let c = induced_product(t, a, b)?;
            table.push(one.index_of(&c).ok_or(Error::UnknownElement(c))?);
        }
    }
    let e = one.index_of(&unit).ok_or(Error::UnknownElement(unit))?;
    FiniteMonoid::from_indices(one, e, table)
}

/// `ε_T` at `X`: `T(1 × X ≅ X) ∘ s_{1,X}` applied to `(a, x)`.
pub fn counit_component(t: &dyn Monad, a: &Atom, x: &Atom) -> Result<Atom> {
    let strengthened = canonical_strength(t, a, x)?;
    t.act(&drop_left_unit, &strengthened)
}

/// `ε_T` tabulated on `T1 × X`.
pub fn counit_map(t: &dyn Monad, x: &FinSet, limits: &Limits) -> Result<FinMap> {
    let one = t.carrier(&FinSet::unit(), limits)?;
    let domain = one.product(x);
    let codomain = t.carrier(x, limits)?;
    let images = domain
        .iter()
        .map(|p| {
            let (a, b) = split_pair(p)?;
            let img = counit_component(t, a, b)?;
            codomain.index_of(&img).ok_or(Error::UnknownElement(img))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FinMap::from_indices(&domain, &codomain, images))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonoidMorphism {
    pub source: FiniteMonoid,
    pub target: FiniteMonoid,
    pub map: Vec<usize>,
}

impl MonoidMorphism {
    pub fn is_homomorphism(&self) -> bool {
        let n = self.source.len();
        self.map[self.source.unit_index()] == self.target.unit_index()
            && (0..n).all(|a| {
                (0..n).all(|b| {
                    self.map[self.source.mult(a, b)] == self.target.mult(self.map[a], self.map[b])
                })
            })
    }

    pub fn is_bijective(&self) -> bool {
        let mut seen = vec![false; self.target.len()];
        self.map.len() == self.target.len()
            && self
                .map
                .iter()
                .all(|&j| !std::mem::replace(&mut seen[j], true))
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_homomorphism() && self.is_bijective()
    }
}

/// `ν_M: M → R L M = M × 1`, `m ↦ (m, *)`.
pub fn unit_nu(m: &FiniteMonoid, limits: &Limits) -> Result<MonoidMorphism> {
    let target = monoid_from_monad(&monad_from_monoid(m), limits)?;
    let map = m
        .carrier()
        .iter()
        .map(|a| {
            let img = Atom::pair(a.clone(), Atom::Star);
            target
                .carrier()
                .index_of(&img)
                .ok_or(Error::UnknownElement(img))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MonoidMorphism {
        source: m.clone(),
        target,
        map,
    })
}

/// Budget for pointwise law checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LawSweep {
    /// Sets of every size `0..=max_size` are swept.
    pub max_size: usize,
    /// Iterated carriers larger than this are sampled instead of enumerated.
    pub exhaustive_cap: usize,
    pub samples: usize,
    pub seed: u64,
}

impl Default for LawSweep {
    fn default() -> Self {
        LawSweep {
            max_size: 3,
            exhaustive_cap: 4096,
            samples: 256,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LawCheck {
    pub law: String,
    pub points: usize,
    /// Whether every point of the law was enumerated rather than sampled.
    pub exhaustive: bool,
    /// The first few violating points.
    pub violations: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LawReport {
    pub subject: String,
    pub checks: Vec<LawCheck>,
    /// Laws that could not be checked, with the reason.
    pub skipped: Vec<(String, String)>,
}

const MAX_RECORDED: usize = 5;

impl LawReport {
    fn new(subject: String) -> Self {
        LawReport {
            subject,
            ..Default::default()
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.violations.is_empty())
    }

    pub fn violation_count(&self) -> usize {
        self.checks.iter().map(|c| c.violations.len()).sum()
    }

    fn entry(&mut self, law: &str) -> &mut LawCheck {
        if let Some(i) = self.checks.iter().position(|c| c.law == law) {
            return &mut self.checks[i];
        }
        self.checks.push(LawCheck {
            law: law.to_string(),
            points: 0,
            exhaustive: true,
            violations: Vec::new(),
        });
        self.checks.last_mut().unwrap()
    }

    fn record(&mut self, law: &str, ok: bool, detail: impl FnOnce() -> String) {
        let e = self.entry(law);
        e.points += 1;
        if !ok && e.violations.len() < MAX_RECORDED {
            e.violations.push(detail());
        }
    }

    fn mark_sampled(&mut self, law: &str) {
        self.entry(law).exhaustive = false;
    }

    pub fn merge(&mut self, other: LawReport) {
        for c in other.checks {
            let e = self.entry(&c.law);
            e.points += c.points;
            e.exhaustive &= c.exhaustive;
            for v in c.violations {
                if e.violations.len() < MAX_RECORDED {
                    e.violations.push(v);
                }
            }
        }
        self.skipped.extend(other.skipped);
    }
}

impl fmt::Display for LawReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.subject)?;
        for c in &self.checks {
            let status = if c.violations.is_empty() {
                "ok"
            } else {
                "FAIL"
            };
            let mode = if c.exhaustive {
                "exhaustive"
            } else {
                "sampled"
            };
            writeln!(f, "  {:<28} {status} ({} points, {mode})", c.law, c.points)?;
            for v in &c.violations {
                writeln!(f, "    at {v}")?;
            }
        }
        for (law, why) in &self.skipped {
            writeln!(f, "  {law:<28} skipped: {why}")?;
        }
        Ok(())
    }
}

struct Sweeper<'a> {
    t: &'a dyn Monad,
    sweep: LawSweep,
    rng: ChaCha8Rng,
    report: LawReport,
    limits: Limits,
}

impl<'a> Sweeper<'a> {
    fn new(t: &'a dyn Monad, sweep: LawSweep) -> Self {
        Sweeper {
            t,
            sweep,
            rng: ChaCha8Rng::seed_from_u64(sweep.seed),
            report: LawReport::new(t.name()),
            limits: Limits {
                node_cap: sweep.exhaustive_cap,
                ..Limits::default()
            },
        }
    }

    fn sets(&self) -> Vec<FinSet> {
        (0..=self.sweep.max_size).map(FinSet::range).collect()
    }

    /// Points of `T^levels X`, and whether they were enumerated exhaustively.
    fn points(&mut self, x: &FinSet, levels: usize) -> Result<(Vec<Atom>, bool)> {
        let mut pts: Vec<Atom> = x.iter().cloned().collect();
        let mut exhaustive = true;
        for _ in 0..levels {
            if exhaustive {
                match self
                    .t
                    .elements(&FinSet::collect(pts.iter().cloned()), &self.limits)
                {
                    Ok(e) if e.len() <= self.sweep.exhaustive_cap => {
                        pts = e;
                        continue;
                    }
                    Ok(_)
                    | Err(Error::SizeCapExceeded { .. })
                    | Err(Error::DepthBudgetExceeded { .. }) => {}
                    Err(e) => return Err(e),
                }
                exhaustive = false;
            }
            if pts.is_empty() {
                return Err(Error::BudgetExceeded(self.sweep.exhaustive_cap));
            }
            let prev = std::mem::take(&mut pts);
            let mut leaf = |r: &mut dyn RngCore| prev[r.gen_range(0..prev.len())].clone();
            pts = (0..self.sweep.samples)
                .map(|_| self.t.random_over(&mut leaf, &mut self.rng))
                .collect();
        }
        Ok((pts, exhaustive))
    }

    fn same(&self, a: &Atom, b: &Atom) -> Result<bool> {
        self.t.equivalent(a, b)
    }

    fn functor_laws(&mut self) -> Result<()> {
        let sets = self.sets();
        for x in &sets {
            let (tx, _) = self.points(x, 1)?;
            for t in &tx {
                let img = self.t.act(&|a| Ok(a.clone()), t)?;
                let ok = self.same(&img, t)?;
                self.report
                    .record("functor identity", ok, || format!("{t}"));
            }
            for y in &sets {
                for z in &sets {
                    for f in FinMap::all(x, y) {
                        for g in FinMap::all(y, z) {
                            let gf = f.then(&g)?;
                            for t in &tx {
                                let lhs = self.t.act(&|a| gf.apply(a).cloned(), t)?;
                                let mid = self.t.act(&|a| f.apply(a).cloned(), t)?;
                                let rhs = self.t.act(&|a| g.apply(a).cloned(), &mid)?;
                                let ok = self.same(&lhs, &rhs)?;
                                self.report.record("functor composition", ok, || {
                                    format!("{t} under {f:?} then {g:?}")
                                });
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn naturality(&mut self) -> Result<()> {
        let sets = self.sets();
        for x in &sets {
            let (ttx, exhaustive) = self.points(x, 2)?;
            if !exhaustive {
                self.report.mark_sampled("multiplication natural");
            }
            for y in &sets {
                for f in FinMap::all(x, y) {
                    let fa = |a: &Atom| f.apply(a).cloned();
                    for a in x.iter() {
                        let lhs = self.t.act(&fa, &self.t.unit(a))?;
                        let rhs = self.t.unit(f.apply(a)?);
                        let ok = self.same(&lhs, &rhs)?;
                        self.report
                            .record("unit natural", ok, || format!("{a} under {f:?}"));
                    }
                    let tf = |u: &Atom| self.t.act(&fa, u);
                    for tt in &ttx {
                        let lhs = self.t.act(&fa, &self.t.mult(tt)?)?;
                        let rhs = self.t.mult(&self.t.act(&tf, tt)?)?;
                        let ok = self.same(&lhs, &rhs)?;
                        self.report
                            .record("multiplication natural", ok, || format!("{tt} under {f:?}"));
                    }
                }
            }
        }
        Ok(())
    }

    fn monad_laws(&mut self) -> Result<()> {
        for x in self.sets() {
            let (tx, _) = self.points(&x, 1)?;
            let eta = |a: &Atom| Ok(self.t.unit(a));
            for t in &tx {
                let left = self.t.mult(&self.t.unit(t))?;
                let ok = self.same(&left, t)?;
                self.report.record("left unit", ok, || format!("{t}"));
                let right = self.t.mult(&self.t.act(&eta, t)?)?;
                let ok = self.same(&right, t)?;
                self.report.record("right unit", ok, || format!("{t}"));
            }
            let (tttx, exhaustive) = self.points(&x, 3)?;
            if !exhaustive {
                self.report.mark_sampled("associativity");
            }
            let mu = |u: &Atom| self.t.mult(u);
            for ttt in &tttx {
                let lhs = self.t.mult(&self.t.mult(ttt)?)?;
                let rhs = self.t.mult(&self.t.act(&mu, ttt)?)?;
                let ok = self.same(&lhs, &rhs)?;
                self.report.record("associativity", ok, || format!("{ttt}"));
            }
        }
        Ok(())
    }

    fn strength_laws(&mut self) -> Result<()> {
        let sets = self.sets();
        let t = self.t;
        for x in &sets {
            let (tx, _) = self.points(x, 1)?;
            let (ttx, exhaustive) = self.points(x, 2)?;
            if !exhaustive {
                self.report.mark_sampled("strength multiplication");
            }
            for elem in &tx {
                let s = canonical_strength(t, elem, &Atom::Star)?;
                let back = t.act(&drop_right_unit, &s)?;
                let ok = self.same(&back, elem)?;
                self.report
                    .record("strength unit object", ok, || format!("{elem}"));
            }
            for y in &sets {
                // Naturality in each variable separately.
                for x2 in &sets {
                    for f in FinMap::all(x, x2) {
                        let f_times_y = |p: &Atom| {
                            let (a, b) = split_pair(p)?;
                            Ok(Atom::pair(f.apply(a)?.clone(), b.clone()))
                        };
                        for elem in &tx {
                            let moved = t.act(&|a| f.apply(a).cloned(), elem)?;
                            for b in y.iter() {
                                let lhs = t.act(&f_times_y, &canonical_strength(t, elem, b)?)?;
                                let rhs = canonical_strength(t, &moved, b)?;
                                let ok = self.same(&lhs, &rhs)?;
                                self.report.record("strength natural in X", ok, || {
                                    format!("({elem}, {b}) under {f:?}")
                                });
                            }
                        }
                    }
                }
                for y2 in &sets {
                    for g in FinMap::all(y, y2) {
                        let x_times_g = |p: &Atom| {
                            let (a, b) = split_pair(p)?;
                            Ok(Atom::pair(a.clone(), g.apply(b)?.clone()))
                        };
                        for elem in &tx {
                            for b in y.iter() {
                                let lhs = t.act(&x_times_g, &canonical_strength(t, elem, b)?)?;
                                let rhs = canonical_strength(t, elem, g.apply(b)?)?;
                                let ok = self.same(&lhs, &rhs)?;
                                self.report.record("strength natural in Y", ok, || {
                                    format!("({elem}, {b}) under {g:?}")
                                });
                            }
                        }
                    }
                }
                for b in y.iter() {
                    for a in x.iter() {
                        let lhs = canonical_strength(t, &t.unit(a), b)?;
                        let rhs = t.unit(&Atom::pair(a.clone(), b.clone()));
                        let ok = self.same(&lhs, &rhs)?;
                        self.report
                            .record("strength unit", ok, || format!("({a}, {b})"));
                    }
                    let s_inner = |p: &Atom| {
                        let (u, c) = split_pair(p)?;
                        canonical_strength(t, u, c)
                    };
                    for tt in &ttx {
                        let lhs = canonical_strength(t, &t.mult(tt)?, b)?;
                        let rhs = t.mult(&t.act(&s_inner, &canonical_strength(t, tt, b)?)?)?;
                        let ok = self.same(&lhs, &rhs)?;
                        self.report
                            .record("strength multiplication", ok, || format!("({tt}, {b})"));
                    }
                    for z in &sets {
                        let reassociate = |p: &Atom| {
                            let (xy, c) = split_pair(p)?;
                            let (a, b) = split_pair(xy)?;
                            Ok(Atom::pair(a.clone(), Atom::pair(b.clone(), c.clone())))
                        };
                        for c in z.iter() {
                            for elem in &tx {
                                let twice =
                                    canonical_strength(t, &canonical_strength(t, elem, b)?, c)?;
                                let lhs = t.act(&reassociate, &twice)?;
                                let rhs =
                                    canonical_strength(t, elem, &Atom::pair(b.clone(), c.clone()))?;
                                let ok = self.same(&lhs, &rhs)?;
                                self.report.record("strength associativity", ok, || {
                                    format!("({elem}, {b}, {c})")
                                });
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn counit_laws(&mut self) -> Result<()> {
        let t = self.t;
        let induced = match monoid_from_monad(t, &self.limits) {
            Ok(m) => m,
            Err(e @ (Error::CarrierNotMaterializable(_) | Error::SizeCapExceeded { .. })) => {
                self.report.skipped.push(("counit".into(), e.to_string()));
                return Ok(());
            }
            Err(Error::NotAMonoid(why)) => {
                self.report.record("induced monoid laws", false, || why);
                return Ok(());
            }
            Err(e) => return Err(e),
        };
        self.report.record("induced monoid laws", true, String::new);
        let one = induced.carrier().clone();
        let star_unit = t.unit(&Atom::Star);
        let sets = self.sets();
        for x in &sets {
            for a in one.iter() {
                for y in &sets {
                    for f in FinMap::all(x, y) {
                        for p in x.iter() {
                            let lhs =
                                t.act(&|v| f.apply(v).cloned(), &counit_component(t, a, p)?)?;
                            let rhs = counit_component(t, a, f.apply(p)?)?;
                            let ok = self.same(&lhs, &rhs)?;
                            self.report
                                .record("counit natural", ok, || format!("({a}, {p}) under {f:?}"));
                        }
                    }
                }
            }
            for p in x.iter() {
                let lhs = counit_component(t, &star_unit, p)?;
                let ok = self.same(&lhs, &t.unit(p))?;
                self.report
                    .record("counit preserves unit", ok, || format!("{p}"));
                for a in one.iter() {
                    for b in one.iter() {
                        let ab = induced.mult_atoms(a, b)?;
                        let lhs = counit_component(t, &ab, p)?;
                        let inner = t.act(&|_| Ok(Atom::pair(b.clone(), p.clone())), a)?;
                        let eps = |q: &Atom| {
                            let (c, v) = split_pair(q)?;
                            counit_component(t, c, v)
                        };
                        let rhs = t.mult(&t.act(&eps, &inner)?)?;
                        let ok = self.same(&lhs, &rhs)?;
                        self.report
                            .record("counit preserves mult", ok, || format!("({a}, ({b}, {p}))"));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Functor laws, naturality of unit and multiplication, and the three monad
/// laws.
pub fn check_monad_laws(t: &dyn Monad, sweep: LawSweep) -> Result<LawReport> {
    let mut s = Sweeper::new(t, sweep);
    s.functor_laws()?;
    s.naturality()?;
    s.monad_laws()?;
    Ok(s.report)
}

/// Naturality and the four coherence axioms of the canonical strength.
pub fn check_strength_laws(t: &dyn Monad, sweep: LawSweep) -> Result<LawReport> {
    let mut s = Sweeper::new(t, sweep);
    s.strength_laws()?;
    Ok(s.report)
}

/// Naturality of `ε_T` and that it is a monad morphism `L(RT) → T`.
pub fn check_counit_laws(t: &dyn Monad, sweep: LawSweep) -> Result<LawReport> {
    let mut s = Sweeper::new(t, sweep);
    s.counit_laws()?;
    Ok(s.report)
}

/// Every law sweep for one monad.
pub fn check_all_laws(t: &dyn Monad, sweep: LawSweep) -> Result<LawReport> {
    let mut s = Sweeper::new(t, sweep);
    s.functor_laws()?;
    s.naturality()?;
    s.monad_laws()?;
    s.strength_laws()?;
    s.counit_laws()?;
    Ok(s.report)
}

/// `check_triangle_identities`: `ε_{LM} ∘ Lν_M = id` on `M × X` for every
/// `X` up to the size bound, and `Rε_T ∘ ν_{RT} = id` on `T1`.
pub fn check_triangle_identities(
    m: &FiniteMonoid,
    t: &dyn Monad,
    size_bound: usize,
    limits: &Limits,
) -> Result<LawReport> {
    let mut report = LawReport::new(format!("triangles for {m} and {}", t.name()));
    let lm = monad_from_monoid(m);
    for n in 0..=size_bound {
        let x = FinSet::range(n);
        for p in lm.carrier(&x, limits)?.iter() {
            let (a, v) = split_pair(p)?;
            let nu_a = Atom::pair(a.clone(), Atom::Star);
            let back = counit_component(&lm, &nu_a, v)?;
            report.record("first triangle", &back == p, || format!("{p}"));
        }
    }
    let one = t.carrier(&FinSet::unit(), limits)?;
    for a in one.iter() {
        let nu = Atom::pair(a.clone(), Atom::Star);
        let (c, v) = split_pair(&nu)?;
        let back = counit_component(t, c, v)?;
        let ok = t.equivalent(&back, a)?;
        report.record("second triangle", ok, || format!("{a}"));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signature::validate_signature;
    use crate::term::parse_term;

    fn quick() -> LawSweep {
        LawSweep {
            max_size: 2,
            ..LawSweep::default()
        }
    }

    #[test]
    fn monoid_validation() {
        assert!(FiniteMonoid::from_indices(FinSet::range(2), 0, vec![0, 1, 1, 1]).is_ok());
        // Left-zero band without unit.
        let e = FiniteMonoid::from_indices(FinSet::range(2), 0, vec![0, 0, 1, 1]).unwrap_err();
        assert!(matches!(e, Error::NotAMonoid(_)));
        // x·y = 1 - x has no unit and is not associative.
        assert!(FiniteMonoid::from_indices(FinSet::range(2), 0, vec![1, 1, 0, 0]).is_err());
        assert!(FiniteMonoid::from_indices(FinSet::empty(), 0, vec![]).is_err());
    }

    #[test]
    fn monoid_text_round_trips() {
        let text = "monoid carrier 0 1; unit 1; mult (0,0)->0 (0,1)->0 (1,0)->0 (1,1)->1";
        let m: FiniteMonoid = text.parse().unwrap();
        assert_eq!(m, FiniteMonoid::boolean_and());
        assert_eq!(m.to_string(), text);
        assert!("monoid carrier 0 1; unit 1; mult (0,0)->0"
            .parse::<FiniteMonoid>()
            .is_err());
        assert!("monoid carrier 0; unit 0; mult (0,0)->0 (0,0)->0"
            .parse::<FiniteMonoid>()
            .is_err());
    }

    #[test]
    fn monoid_counts_up_to_isomorphism() {
        let counts: Vec<usize> = (1..=4).map(|n| monoids_of_order(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 7, 35]);
    }

    #[test]
    fn isomorphism_search() {
        let z2 = FiniteMonoid::cyclic(2);
        let flipped = FiniteMonoid::from_indices(FinSet::range(2), 1, vec![1, 0, 0, 1]).unwrap();
        assert_eq!(z2.isomorphism_to(&flipped), Some(vec![1, 0]));
        assert!(z2.isomorphism_to(&FiniteMonoid::boolean_and()).is_none());
        assert!(FiniteMonoid::klein()
            .isomorphism_to(&FiniteMonoid::cyclic(4))
            .is_none());
    }

    #[test]
    fn free_mset_examples() {
        let z2 = monad_from_monoid(&FiniteMonoid::cyclic(2));
        let x = Atom::name("x");
        let one = Atom::name("1");
        let tt = Atom::pair(one.clone(), Atom::pair(one.clone(), x.clone()));
        assert_eq!(
            z2.mult(&tt).unwrap(),
            Atom::pair(Atom::name("0"), x.clone())
        );
        let mx = Atom::pair(one.clone(), x.clone());
        assert_eq!(z2.mult(&z2.unit(&mx)).unwrap(), mx);
        let trivial = monad_from_monoid(&FiniteMonoid::trivial());
        let set = FinSet::range(3);
        assert_eq!(trivial.carrier(&set, &Limits::default()).unwrap().len(), 3);
    }

    #[test]
    fn strength_examples() {
        let set = Atom::set([Atom::name("a"), Atom::name("b")]);
        let zero = Atom::name("0");
        let want = Atom::set([
            Atom::pair(Atom::name("a"), zero.clone()),
            Atom::pair(Atom::name("b"), zero.clone()),
        ]);
        assert_eq!(
            canonical_strength(&FinitePowerset, &set, &zero).unwrap(),
            want
        );

        let lm = monad_from_monoid(&FiniteMonoid::cyclic(3));
        let t = Atom::pair(Atom::name("2"), Atom::name("x"));
        let y = Atom::name("y");
        assert_eq!(
            canonical_strength(&lm, &t, &y).unwrap(),
            Atom::pair(Atom::name("2"), Atom::pair(Atom::name("x"), y))
        );
    }

    #[test]
    fn powerset_induces_conjunction() {
        let m = monoid_from_monad(&FinitePowerset, &Limits::default()).unwrap();
        assert_eq!(m.carrier().get(0), Some(&Atom::set([])));
        assert_eq!(m.carrier().get(1), Some(&Atom::set([Atom::Star])));
        assert_eq!(m.relabel(), FiniteMonoid::boolean_and());
    }

    #[test]
    fn identity_induces_trivial_monoid() {
        let m = monoid_from_monad(&IdentityMonad, &Limits::default()).unwrap();
        assert_eq!(m.relabel(), FiniteMonoid::trivial());
    }

    #[test]
    fn term_monad_has_no_finite_unit_carrier() {
        let t = TermMonad::new(validate_signature(&[("f", 1)]).unwrap(), 2);
        assert!(matches!(
            monoid_from_monad(&t, &Limits::default()),
            Err(Error::CarrierNotMaterializable(_))
        ));
    }

    #[test]
    fn counit_examples() {
        let a = Atom::name("a");
        let star = Atom::set([Atom::Star]);
        let empty = Atom::set([]);
        assert_eq!(
            counit_component(&FinitePowerset, &star, &a).unwrap(),
            Atom::set([a.clone()])
        );
        assert_eq!(
            counit_component(&FinitePowerset, &empty, &a).unwrap(),
            empty
        );
        assert_eq!(
            counit_component(&IdentityMonad, &Atom::Star, &a).unwrap(),
            a
        );

        let lm = monad_from_monoid(&FiniteMonoid::cyclic(2));
        let m1 = Atom::pair(Atom::name("1"), Atom::Star);
        assert_eq!(
            counit_component(&lm, &m1, &Atom::name("v")).unwrap(),
            Atom::pair(Atom::name("1"), Atom::name("v"))
        );
    }

    #[test]
    fn nu_round_trip_is_isomorphism() {
        for m in monoid_corpus() {
            let nu = unit_nu(&m, &Limits::default()).unwrap();
            assert!(nu.is_isomorphism(), "{m}");
            let back = monoid_from_monad(&monad_from_monoid(&m), &Limits::default()).unwrap();
            assert!(m.isomorphism_to(&back.relabel()).is_some());
        }
    }

    #[test]
    fn finite_monads_satisfy_every_law() {
        let monads: Vec<Box<dyn Monad>> = vec![
            Box::new(IdentityMonad),
            Box::new(FinitePowerset),
            Box::new(monad_from_monoid(&FiniteMonoid::cyclic(2))),
            Box::new(monad_from_monoid(&FiniteMonoid::boolean_and())),
        ];
        for t in &monads {
            let report = check_all_laws(t.as_ref(), quick()).unwrap();
            assert!(report.passed(), "{report}");
            assert!(report.skipped.is_empty());
            assert!(report.checks.len() >= 14, "{report}");
        }
    }

    #[test]
    fn term_monad_laws_on_bounded_part() {
        let t = TermMonad::new(validate_signature(&[("g", 2), ("e", 0)]).unwrap(), 1);
        let report = check_all_laws(&t, quick()).unwrap();
        assert!(report.passed(), "{report}");
        assert_eq!(report.skipped.len(), 1);
    }

    #[test]
    fn triangles_hold() {
        let z2 = FiniteMonoid::cyclic(2);
        for t in [
            &FinitePowerset as &dyn Monad,
            &IdentityMonad,
            &monad_from_monoid(&z2),
        ] {
            let r = check_triangle_identities(&z2, t, 3, &Limits::default()).unwrap();
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn broken_monad_is_caught() {
        // The powerset with a unit that forgets its argument.
        struct Broken;
        impl Monad for Broken {
            fn name(&self) -> String {
                "broken".into()
            }
            fn carrier(&self, x: &FinSet, l: &Limits) -> Result<FinSet> {
                FinitePowerset.carrier(x, l)
            }
            fn act(&self, f: AtomFn, t: &Atom) -> Result<Atom> {
                FinitePowerset.act(f, t)
            }
            fn unit(&self, _: &Atom) -> Atom {
                Atom::set([])
            }
            fn mult(&self, tt: &Atom) -> Result<Atom> {
                FinitePowerset.mult(tt)
            }
            fn random_over(
                &self,
                leaf: &mut dyn FnMut(&mut dyn RngCore) -> Atom,
                rng: &mut dyn RngCore,
            ) -> Atom {
                FinitePowerset.random_over(leaf, rng)
            }
        }
        let report = check_monad_laws(&Broken, quick()).unwrap();
        assert!(!report.passed());
        let failing: Vec<&str> = report
            .checks
            .iter()
            .filter(|c| !c.violations.is_empty())
            .map(|c| c.law.as_str())
            .collect();
        assert!(failing.contains(&"left unit"));
    }

    #[test]
    fn presented_monoid_multiplies_exponents() {
        let sig = validate_signature(&[("g", 2), ("e", 0)]).unwrap();
        let eq = |vars: &[&str], l: &str, r: &str| {
            let vs = FinSet::from_names(vars).unwrap();
            Equation::new(
                &sig,
                vs.clone(),
                parse_term(l, &sig, Some(&vs)).unwrap(),
                parse_term(r, &sig, Some(&vs)).unwrap(),
            )
            .unwrap()
        };
        let eqs = vec![
            eq(&["x", "y", "z"], "g(g(x, y), z)", "g(x, g(y, z))"),
            eq(&["x"], "g(e, x)", "x"),
            eq(&["x"], "g(x, e)", "x"),
        ];
        let t = PresentedMonad::new(sig.clone(), eqs, 1, 2, Limits::default()).unwrap();
        let bounded = t.bounded_induced_monoid(2).unwrap();
        let exponent = |i: usize| bounded.representatives[i].leaves().len();
        assert_eq!(bounded.len(), 5);
        assert_eq!(exponent(bounded.unit), 1);
        for i in 0..bounded.len() {
            for j in 0..bounded.len() {
                let product = exponent(i) * exponent(j);
                match bounded.mult(i, j) {
                    Some(k) => assert_eq!(exponent(k), product),
                    None => assert!(product > 4),
                }
            }
        }
        assert!(bounded.laws_hold_where_defined());
        let x = FinSet::from_names(&["x"]).unwrap();
        assert_eq!(t.classes(&x).unwrap().len(), 3);
        let report = check_monad_laws(&t, quick()).unwrap();
        assert!(report.passed(), "{report}");
    }
}
