//! Σ-terms: the free monad `TX` with unit, flattening, functor action,
//! Kleisli substitution and the canonical strength, plus a hash-consing
//! store that gives every distinct term a stable node id.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;
use std::sync::Arc;

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::finset::{Atom, FinMap, FinSet};
use crate::signature::{chain_sizes, Signature, Symbol};
use crate::Limits;

/// A finite Σ-term over leaves of type `V`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Term<V> {
    Var(V),
    App(Symbol, Arc<[Term<V>]>),
}

impl<V> Term<V> {
    pub fn app(op: Symbol, args: Vec<Term<V>>) -> Self {
        Term::App(op, args.into())
    }

    pub fn constant(op: Symbol) -> Self {
        Term::App(op, Arc::from(Vec::new()))
    }

    /// Generators have depth 0, constants depth 1.
    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    /// Leaves in left-to-right order.
    pub fn leaves(&self) -> Vec<&V> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a V>) {
        match self {
            Term::Var(v) => out.push(v),
            Term::App(_, args) => args.iter().for_each(|a| a.collect_leaves(out)),
        }
    }

    /// All subterms, children before parents.
    pub fn subterms(&self) -> Vec<&Term<V>> {
        let mut out = Vec::new();
        self.collect_subterms(&mut out);
        out
    }

    fn collect_subterms<'a>(&'a self, out: &mut Vec<&'a Term<V>>) {
        if let Term::App(_, args) = self {
            args.iter().for_each(|a| a.collect_subterms(out));
        }
        out.push(self);
    }

    /// `Tf`: relabels leaves, keeping the shape.
    pub fn map_vars<W>(&self, f: &mut impl FnMut(&V) -> W) -> Term<W> {
        match self {
            Term::Var(v) => Term::Var(f(v)),
            Term::App(op, args) => {
                Term::App(op.clone(), args.iter().map(|a| a.map_vars(f)).collect())
            }
        }
    }

    pub fn try_map_vars<W, E>(&self, f: &mut impl FnMut(&V) -> Result<W, E>) -> Result<Term<W>, E> {
        Ok(match self {
            Term::Var(v) => Term::Var(f(v)?),
            Term::App(op, args) => Term::App(
                op.clone(),
                args.iter()
                    .map(|a| a.try_map_vars(f))
                    .collect::<Result<Vec<_>, E>>()?
                    .into(),
            ),
        })
    }

    /// Kleisli extension: grafts `sigma(x)` at every leaf `x`.
    pub fn substitute<W: Clone>(&self, sigma: &mut impl FnMut(&V) -> Term<W>) -> Term<W> {
        match self {
            Term::Var(v) => sigma(v),
            Term::App(op, args) => Term::App(
                op.clone(),
                args.iter().map(|a| a.substitute(sigma)).collect(),
            ),
        }
    }

    pub fn try_substitute<W: Clone, E>(
        &self,
        sigma: &mut impl FnMut(&V) -> Result<Term<W>, E>,
    ) -> Result<Term<W>, E> {
        Ok(match self {
            Term::Var(v) => sigma(v)?,
            Term::App(op, args) => Term::App(
                op.clone(),
                args.iter()
                    .map(|a| a.try_substitute(sigma))
                    .collect::<Result<Vec<_>, E>>()?
                    .into(),
            ),
        })
    }

    /// `s_{X,Y}(t, y)`: pairs every leaf with `y`.
    pub fn strength<Y: Clone>(&self, y: &Y) -> Term<(V, Y)>
    where
        V: Clone,
    {
        self.map_vars(&mut |x| (x.clone(), y.clone()))
    }

    /// Checks every node's argument count against `sig`.
    pub fn check_arities(&self, sig: &Signature) -> Result<()> {
        if let Term::App(op, args) = self {
            let expected = sig
                .arity(op.as_str())
                .ok_or_else(|| Error::UnknownSymbol(op.to_string()))?;
            if expected != args.len() {
                return Err(Error::ArityMismatch {
                    symbol: op.to_string(),
                    expected,
                    found: args.len(),
                });
            }
            args.iter().try_for_each(|a| a.check_arities(sig))?;
        }
        Ok(())
    }
}

impl<V: Clone> Term<Term<V>> {
    /// `μ`: grafts the leaf terms into position.
    pub fn flatten(&self) -> Term<V> {
        self.substitute(&mut |t: &Term<V>| t.clone())
    }
}

impl<V: Ord> Ord for Term<V> {
    /// Depth, then size, then structure (leaves before applications,
    /// symbols by name, arguments lexicographically).
    fn cmp(&self, other: &Self) -> Ordering {
        self.depth()
            .cmp(&other.depth())
            .then_with(|| self.size().cmp(&other.size()))
            .then_with(|| self.structural_cmp(other))
    }
}

impl<V: Ord> PartialOrd for Term<V> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<V: Ord> Term<V> {
    fn structural_cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Term::Var(a), Term::Var(b)) => a.cmp(b),
            (Term::Var(_), Term::App(..)) => Ordering::Less,
            (Term::App(..), Term::Var(_)) => Ordering::Greater,
            (Term::App(f, xs), Term::App(g, ys)) => f
                .cmp(g)
                .then_with(|| xs.len().cmp(&ys.len()))
                .then_with(|| {
                    xs.iter()
                        .zip(ys.iter())
                        .map(|(x, y)| x.cmp(y))
                        .find(|o| o.is_ne())
                        .unwrap_or(Ordering::Equal)
                }),
        }
    }
}

impl<V: fmt::Display> fmt::Display for Term<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::App(op, args) if args.is_empty() => write!(f, "{op}"),
            Term::App(op, args) => {
                write!(f, "{op}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl<V: fmt::Display> fmt::Debug for Term<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `η_X(x)`; `x` must be a generator.
pub fn unit(generators: &FinSet, x: &Atom) -> Result<Term<Atom>> {
    if generators.contains(x) {
        Ok(Term::Var(x.clone()))
    } else {
        Err(Error::UnknownGenerator(x.clone()))
    }
}

/// `Tf` for a finite map.
pub fn map_vars(f: &FinMap, t: &Term<Atom>) -> Result<Term<Atom>> {
    t.try_map_vars(&mut |x| f.apply(x).cloned())
}

/// Substitution along a finite assignment; leaves outside its domain are
/// rejected.
pub fn substitute(t: &Term<Atom>, sigma: &HashMap<Atom, Term<Atom>>) -> Result<Term<Atom>> {
    t.try_substitute(&mut |x| {
        sigma
            .get(x)
            .cloned()
            .ok_or_else(|| Error::UndefinedOnElement(x.clone()))
    })
}

/// The canonical strength `TX × Y -> T(X × Y)` at `y ∈ Y`, with pairs as
/// [`Atom::Pair`] leaves.
pub fn strength(t: &Term<Atom>, ys: &FinSet, y: &Atom) -> Result<Term<Atom>> {
    if !ys.contains(y) {
        return Err(Error::UnknownElement(y.clone()));
    }
    Ok(t.map_vars(&mut |x| Atom::pair(x.clone(), y.clone())))
}

/// All terms over `(sig, generators)` of depth at most `depth`, sorted by
/// the term order.
pub fn enumerate_terms(
    sig: &Signature,
    generators: &FinSet,
    depth: usize,
    limits: &Limits,
) -> Result<Vec<Term<Atom>>> {
    let sizes = chain_sizes(sig, generators.len(), depth);
    if let Some((d, _)) = sizes
        .iter()
        .enumerate()
        .find(|(_, s)| s.is_none_or(|s| s > limits.node_cap))
    {
        return Err(Error::DepthBudgetExceeded {
            depth: d,
            cap: limits.node_cap,
        });
    }
    let mut level: Vec<Term<Atom>> = generators.iter().cloned().map(Term::Var).collect();
    for _ in 0..depth {
        let mut next: Vec<Term<Atom>> = generators.iter().cloned().map(Term::Var).collect();
        for (op, arity) in sig.ops() {
            let mut idx = vec![0usize; arity];
            if arity > 0 && level.is_empty() {
                continue;
            }
            loop {
                next.push(Term::app(
                    op.clone(),
                    idx.iter().map(|&i| level[i].clone()).collect(),
                ));
                let mut k = arity;
                loop {
                    if k == 0 {
                        break;
                    }
                    k -= 1;
                    idx[k] += 1;
                    if idx[k] < level.len() {
                        break;
                    }
                    idx[k] = 0;
                }
                if idx.iter().all(|&i| i == 0) {
                    break;
                }
            }
        }
        level = next;
    }
    level.sort();
    Ok(level)
}

/// Identifier of an interned node.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct TermId(pub u32);

impl TermId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Node<V> {
    Leaf(V),
    App(Symbol, SmallVec<[TermId; 2]>),
}

/// Hash-consing arena: structurally equal terms receive the same id.
#[derive(Clone, Debug)]
pub struct TermStore<V = Atom> {
    nodes: Vec<Node<V>>,
    index: HashMap<Node<V>, TermId>,
}

impl<V> Default for TermStore<V> {
    fn default() -> Self {
        TermStore {
            nodes: Vec::new(),
            index: HashMap::new(),
        }
    }
}

impl<V: Clone + Eq + Hash> TermStore<V> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, id: TermId) -> &Node<V> {
        &self.nodes[id.index()]
    }

    /// Interns one node whose children are already interned. Returns the
    /// id and whether the node is new.
    pub fn intern_node(&mut self, node: Node<V>) -> (TermId, bool) {
        if let Some(&id) = self.index.get(&node) {
            return (id, false);
        }
        let id = TermId(self.nodes.len() as u32);
        self.nodes.push(node.clone());
        self.index.insert(node, id);
        (id, true)
    }

    pub fn intern(&mut self, t: &Term<V>) -> TermId {
        let node = match t {
            Term::Var(v) => Node::Leaf(v.clone()),
            Term::App(op, args) => {
                Node::App(op.clone(), args.iter().map(|a| self.intern(a)).collect())
            }
        };
        self.intern_node(node).0
    }

    pub fn lookup(&self, node: &Node<V>) -> Option<TermId> {
        self.index.get(node).copied()
    }

    /// Looks a term up without inserting anything.
    pub fn get(&self, t: &Term<V>) -> Option<TermId> {
        let node = match t {
            Term::Var(v) => Node::Leaf(v.clone()),
            Term::App(op, args) => Node::App(
                op.clone(),
                args.iter()
                    .map(|a| self.get(a))
                    .collect::<Option<SmallVec<_>>>()?,
            ),
        };
        self.index.get(&node).copied()
    }

    pub fn term(&self, id: TermId) -> Term<V> {
        match self.node(id) {
            Node::Leaf(v) => Term::Var(v.clone()),
            Node::App(op, kids) => {
                Term::app(op.clone(), kids.iter().map(|&k| self.term(k)).collect())
            }
        }
    }

    pub fn ids(&self) -> impl Iterator<Item = TermId> {
        (0..self.nodes.len() as u32).map(TermId)
    }
}

/// Failure while reading a term, with a 1-based column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermSyntaxError {
    pub col: usize,
    pub kind: TermSyntaxErrorKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TermSyntaxErrorKind {
    Expected(&'static str),
    UnknownSymbol(String),
    UnknownGenerator(String),
    ArityMismatch {
        symbol: String,
        expected: usize,
        found: usize,
    },
}

impl fmt::Display for TermSyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            TermSyntaxErrorKind::Expected(what) => {
                write!(f, "column {}: expected {what}", self.col)
            }
            TermSyntaxErrorKind::UnknownSymbol(s) => {
                write!(f, "column {}: unknown symbol `{s}`", self.col)
            }
            TermSyntaxErrorKind::UnknownGenerator(s) => {
                write!(f, "column {}: unknown generator `{s}`", self.col)
            }
            TermSyntaxErrorKind::ArityMismatch {
                symbol,
                expected,
                found,
            } => write!(
                f,
                "column {}: `{symbol}` expects {expected} argument(s), found {found}",
                self.col
            ),
        }
    }
}

impl std::error::Error for TermSyntaxError {}

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Reads a term such as `g(a, f(b))`.
///
/// An identifier followed by `(` is an operation; a bare identifier is a
/// constant if `sig` declares it with arity 0, otherwise a leaf, which must
/// belong to `leaves` when that set is given.
pub fn parse_term(
    text: &str,
    sig: &Signature,
    leaves: Option<&FinSet>,
) -> Result<Term<Atom>, TermSyntaxError> {
    let mut p = TermParser {
        src: text.as_bytes(),
        pos: 0,
        sig,
        leaves,
        nesting: 0,
    };
    let t = p.term()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error(TermSyntaxErrorKind::Expected("end of term")));
    }
    Ok(t)
}

struct TermParser<'a> {
    src: &'a [u8],
    pos: usize,
    sig: &'a Signature,
    leaves: Option<&'a FinSet>,
    nesting: usize,
}

/// Deeper argument nesting is rejected rather than risking the stack.
pub const MAX_TERM_NESTING: usize = 256;

impl TermParser<'_> {
    fn error(&self, kind: TermSyntaxErrorKind) -> TermSyntaxError {
        TermSyntaxError {
            col: self.pos + 1,
            kind,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn ident(&mut self) -> Result<(usize, String), TermSyntaxError> {
        self.skip_ws();
        let start = self.pos;
        match self.src.get(self.pos) {
            Some(c) if c.is_ascii_alphabetic() || *c == b'_' => {}
            _ => return Err(self.error(TermSyntaxErrorKind::Expected("identifier"))),
        }
        while self
            .src
            .get(self.pos)
            .is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_')
        {
            self.pos += 1;
        }
        // ASCII-only by construction.
        Ok((
            start,
            String::from_utf8_lossy(&self.src[start..self.pos]).into_owned(),
        ))
    }

    fn term(&mut self) -> Result<Term<Atom>, TermSyntaxError> {
        let (start, name) = self.ident()?;
        let at = |kind| TermSyntaxError {
            col: start + 1,
            kind,
        };
        if self.peek() == Some(b'(') {
            if self.nesting >= MAX_TERM_NESTING {
                return Err(self.error(TermSyntaxErrorKind::Expected("shallower nesting")));
            }
            self.pos += 1;
            self.nesting += 1;
            let mut args = Vec::new();
            if self.peek() == Some(b')') {
                self.pos += 1;
            } else {
                loop {
                    args.push(self.term()?);
                    match self.peek() {
                        Some(b',') => self.pos += 1,
                        Some(b')') => {
                            self.pos += 1;
                            break;
                        }
                        _ => return Err(self.error(TermSyntaxErrorKind::Expected("`,` or `)`"))),
                    }
                }
            }
            self.nesting -= 1;
            let sym = self
                .sig
                .symbol(&name)
                .ok_or_else(|| at(TermSyntaxErrorKind::UnknownSymbol(name.clone())))?;
            let expected = self.sig.arity(&name).unwrap();
            if expected != args.len() {
                return Err(at(TermSyntaxErrorKind::ArityMismatch {
                    symbol: name,
                    expected,
                    found: args.len(),
                }));
            }
            return Ok(Term::app(sym.clone(), args));
        }
        match self.sig.arity(&name) {
            Some(0) => Ok(Term::constant(self.sig.symbol(&name).unwrap().clone())),
            Some(expected) => Err(at(TermSyntaxErrorKind::ArityMismatch {
                symbol: name,
                expected,
                found: 0,
            })),
            None => {
                let atom = Atom::name(&name);
                match self.leaves {
                    Some(set) if !set.contains(&atom) => {
                        Err(at(TermSyntaxErrorKind::UnknownGenerator(name)))
                    }
                    _ => Ok(Term::Var(atom)),
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signature::validate_signature;

    fn v(s: &str) -> Term<Atom> {
        Term::Var(Atom::name(s))
    }

    fn g(a: Term<Atom>, b: Term<Atom>) -> Term<Atom> {
        Term::app("g".into(), vec![a, b])
    }

    fn f(a: Term<Atom>) -> Term<Atom> {
        Term::app("f".into(), vec![a])
    }

    #[test]
    fn unit_examples() {
        let x = FinSet::from_names(&["a"]).unwrap();
        assert_eq!(unit(&x, &Atom::name("a")).unwrap(), v("a"));
        assert_eq!(
            unit(&x, &Atom::name("b")),
            Err(Error::UnknownGenerator(Atom::name("b")))
        );
        let t = g(v("a"), f(v("a")));
        assert_eq!(Term::Var(t.clone()).flatten(), t);
    }

    #[test]
    fn map_vars_examples() {
        let x = FinSet::from_names(&["a", "b"]).unwrap();
        let y = FinSet::from_names(&["c"]).unwrap();
        let c = FinMap::new(&x, &y, |_| Atom::name("c")).unwrap();
        assert_eq!(map_vars(&c, &g(v("a"), v("b"))).unwrap(), g(v("c"), v("c")));
        let t = g(v("a"), f(v("b")));
        assert_eq!(map_vars(&FinMap::identity(&x), &t).unwrap(), t);
        assert_eq!(
            map_vars(&FinMap::identity(&y), &t),
            Err(Error::UndefinedOnElement(Atom::name("a")))
        );
    }

    #[test]
    fn flatten_grafts_leaves() {
        let tt: Term<Term<Atom>> = Term::app(
            "g".into(),
            vec![Term::Var(v("a")), Term::Var(g(v("a"), v("a")))],
        );
        assert_eq!(tt.flatten(), g(v("a"), g(v("a"), v("a"))));
    }

    #[test]
    fn substitute_example() {
        let sigma = HashMap::from([(Atom::name("a"), f(v("b")))]);
        assert_eq!(
            substitute(&g(v("a"), v("a")), &sigma).unwrap(),
            g(f(v("b")), f(v("b")))
        );
        let ident: HashMap<Atom, Term<Atom>> = [("a", v("a")), ("b", v("b"))]
            .into_iter()
            .map(|(k, t)| (Atom::name(k), t))
            .collect();
        let t = g(v("a"), f(v("b")));
        assert_eq!(substitute(&t, &ident).unwrap(), t);
    }

    #[test]
    fn strength_examples() {
        let ys = FinSet::range(2);
        let zero = Atom::name("0");
        let t = g(v("a"), v("b"));
        let pair = |x: &str| Term::Var(Atom::pair(Atom::name(x), zero.clone()));
        assert_eq!(strength(&t, &ys, &zero).unwrap(), g(pair("a"), pair("b")));
        assert_eq!(strength(&v("a"), &ys, &zero).unwrap(), pair("a"));
        assert!(strength(&t, &ys, &Atom::name("7")).is_err());
        let one = FinSet::unit();
        let s = strength(&t, &one, &Atom::Star).unwrap();
        let back = s.map_vars(&mut |p| p.as_pair().unwrap().0.clone());
        assert_eq!(back, t);
    }

    #[test]
    fn enumerate_examples() {
        let s = validate_signature(&[("g", 2)]).unwrap();
        let x = FinSet::range(1);
        let limits = Limits::default();
        assert_eq!(enumerate_terms(&s, &x, 2, &limits).unwrap().len(), 5);
        assert_eq!(enumerate_terms(&s, &x, 0, &limits).unwrap(), vec![v("0")]);
        let empty = Signature::empty();
        assert_eq!(enumerate_terms(&empty, &x, 5, &limits).unwrap().len(), 1);
        let terms = enumerate_terms(&s, &x, 3, &limits).unwrap();
        assert!(terms.windows(2).all(|w| w[0] < w[1]));
        assert!(terms.iter().all(|t| t.depth() <= 3));
    }

    #[test]
    fn term_order_puts_shallow_first() {
        assert!(v("b") < f(v("a")));
        assert!(f(v("a")) < g(v("a"), v("a")));
        assert!(g(v("a"), f(v("a"))) < g(f(v("a")), v("a")));
    }

    #[test]
    fn store_interning_is_idempotent() {
        let mut store = TermStore::new();
        let t = g(f(v("a")), f(v("a")));
        let id = store.intern(&t);
        assert_eq!(store.intern(&t), id);
        assert_eq!(store.len(), 3);
        assert_eq!(store.term(id), t);
        assert_eq!(store.get(&f(v("a"))), Some(TermId(1)));
        assert_eq!(store.get(&f(v("b"))), None);
    }

    #[test]
    fn parse_terms() {
        let s = validate_signature(&[("g", 2), ("f", 1), ("e", 0)]).unwrap();
        let t = parse_term("g(a, f( b ))", &s, None).unwrap();
        assert_eq!(t, g(v("a"), f(v("b"))));
        assert_eq!(t.to_string(), "g(a, f(b))");
        assert_eq!(
            parse_term("e", &s, None).unwrap(),
            Term::constant("e".into())
        );
        assert_eq!(
            parse_term("e()", &s, None).unwrap(),
            Term::constant("e".into())
        );
        let err = parse_term("g(a)", &s, None).unwrap_err();
        assert!(matches!(
            err.kind,
            TermSyntaxErrorKind::ArityMismatch { .. }
        ));
        assert_eq!(err.col, 1);
        let err = parse_term("h(a)", &s, None).unwrap_err();
        assert_eq!(err.kind, TermSyntaxErrorKind::UnknownSymbol("h".into()));
        let gens = FinSet::from_names(&["a"]).unwrap();
        let err = parse_term("f(c)", &s, Some(&gens)).unwrap_err();
        assert_eq!(
            (err.col, err.kind),
            (3, TermSyntaxErrorKind::UnknownGenerator("c".into()))
        );
        assert!(parse_term("g(a,", &s, None).is_err());
        assert!(parse_term("a b", &s, None).is_err());
        assert!(parse_term("", &s, None).is_err());
    }
}
