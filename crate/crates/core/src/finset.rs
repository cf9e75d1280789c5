//! Finite sets of atoms and total maps between them.

use std::fmt;
use std::sync::Arc;

use indexmap::IndexSet;

use crate::error::{Error, Result};
use crate::term::Term;

/// An element of a finite set.
///
/// Plain labels cover generators and table carriers; the structured
/// variants exist so that products, powersets and term carriers built by
/// the monad oracles stay inside one element type.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    /// The unique element of the one-point set `1`.
    Star,
    Name(Arc<str>),
    Pair(Arc<(Atom, Atom)>),
    /// A finite subset, kept sorted and free of duplicates.
    Set(Arc<[Atom]>),
    Term(Arc<Term<Atom>>),
}

impl Atom {
    pub fn name(label: &str) -> Self {
        Atom::Name(Arc::from(label))
    }

    pub fn pair(left: Atom, right: Atom) -> Self {
        Atom::Pair(Arc::new((left, right)))
    }

    pub fn set(elements: impl IntoIterator<Item = Atom>) -> Self {
        let mut v: Vec<Atom> = elements.into_iter().collect();
        v.sort();
        v.dedup();
        Atom::Set(v.into())
    }

    pub fn term(t: Term<Atom>) -> Self {
        Atom::Term(Arc::new(t))
    }

    pub fn as_name(&self) -> Option<&str> {
        match self {
            Atom::Name(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_pair(&self) -> Option<(&Atom, &Atom)> {
        match self {
            Atom::Pair(p) => Some((&p.0, &p.1)),
            _ => None,
        }
    }

    pub fn as_set(&self) -> Option<&[Atom]> {
        match self {
            Atom::Set(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_term(&self) -> Option<&Term<Atom>> {
        match self {
            Atom::Term(t) => Some(t),
            _ => None,
        }
    }
}

impl From<&str> for Atom {
    fn from(label: &str) -> Self {
        Atom::name(label)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Star => f.write_str("*"),
            Atom::Name(s) => f.write_str(s),
            Atom::Pair(p) => write!(f, "({},{})", p.0, p.1),
            Atom::Set(s) => {
                f.write_str("{")?;
                for (i, a) in s.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str("}")
            }
            Atom::Term(t) => write!(f, "{t}"),
        }
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A finite set with a fixed, deterministic iteration order.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct FinSet {
    elements: IndexSet<Atom>,
}

impl FinSet {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a set, rejecting repeated elements.
    pub fn new(elements: impl IntoIterator<Item = Atom>) -> Result<Self> {
        let mut set = IndexSet::new();
        for a in elements {
            if let Some(dup) = set.replace(a) {
                return Err(Error::DuplicateElement(dup));
            }
        }
        Ok(FinSet { elements: set })
    }

    /// Builds a set, silently merging repeated elements.
    pub fn collect(elements: impl IntoIterator<Item = Atom>) -> Self {
        FinSet {
            elements: elements.into_iter().collect(),
        }
    }

    pub fn from_names(names: &[&str]) -> Result<Self> {
        Self::new(names.iter().map(|n| Atom::name(n)))
    }

    /// `{0, 1, .., n-1}` as named atoms.
    pub fn range(n: usize) -> Self {
        Self::collect((0..n).map(|i| Atom::name(&i.to_string())))
    }

    /// The one-point set `1 = {*}`.
    pub fn unit() -> Self {
        Self::collect([Atom::Star])
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, a: &Atom) -> bool {
        self.elements.contains(a)
    }

    pub fn index_of(&self, a: &Atom) -> Option<usize> {
        self.elements.get_index_of(a)
    }

    pub fn get(&self, i: usize) -> Option<&Atom> {
        self.elements.get_index(i)
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &Atom> + '_ {
        self.elements.iter()
    }

    /// Cartesian product, enumerated with the left factor varying slowest.
    pub fn product(&self, other: &FinSet) -> FinSet {
        let mut out = IndexSet::with_capacity(self.len() * other.len());
        for a in self.iter() {
            for b in other.iter() {
                out.insert(Atom::pair(a.clone(), b.clone()));
            }
        }
        FinSet { elements: out }
    }

    pub fn is_subset(&self, other: &FinSet) -> bool {
        self.iter().all(|a| other.contains(a))
    }
}

impl fmt::Debug for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, a) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str("}")
    }
}

impl<'a> IntoIterator for &'a FinSet {
    type Item = &'a Atom;
    type IntoIter = indexmap::set::Iter<'a, Atom>;

    fn into_iter(self) -> Self::IntoIter {
        self.elements.iter()
    }
}

/// A total function between finite sets, stored as codomain indices.
#[derive(Clone, PartialEq, Eq)]
pub struct FinMap {
    domain: FinSet,
    codomain: FinSet,
    images: Vec<usize>,
}

impl FinMap {
    /// Tabulates `f` on the domain; every image must lie in the codomain.
    pub fn new(domain: &FinSet, codomain: &FinSet, f: impl Fn(&Atom) -> Atom) -> Result<Self> {
        let images = domain
            .iter()
            .map(|a| {
                let b = f(a);
                codomain.index_of(&b).ok_or(Error::UnknownElement(b))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FinMap {
            domain: domain.clone(),
            codomain: codomain.clone(),
            images,
        })
    }

    /// Builds a map from an explicit graph; fails if it is partial.
    pub fn from_pairs(
        domain: &FinSet,
        codomain: &FinSet,
        pairs: impl IntoIterator<Item = (Atom, Atom)>,
    ) -> Result<Self> {
        let mut images = vec![None; domain.len()];
        for (a, b) in pairs {
            let i = domain
                .index_of(&a)
                .ok_or_else(|| Error::UnknownElement(a.clone()))?;
            let j = codomain.index_of(&b).ok_or(Error::UnknownElement(b))?;
            images[i] = Some(j);
        }
        let images = images
            .into_iter()
            .enumerate()
            .map(|(i, j)| {
                j.ok_or_else(|| Error::UndefinedOnElement(domain.get(i).unwrap().clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FinMap {
            domain: domain.clone(),
            codomain: codomain.clone(),
            images,
        })
    }

    pub(crate) fn from_indices(domain: &FinSet, codomain: &FinSet, images: Vec<usize>) -> Self {
        debug_assert_eq!(domain.len(), images.len());
        FinMap {
            domain: domain.clone(),
            codomain: codomain.clone(),
            images,
        }
    }

    /// Builds a map from image indices, checking that they fit.
    pub fn from_indices_checked(
        domain: &FinSet,
        codomain: &FinSet,
        images: Vec<usize>,
    ) -> Result<Self> {
        if images.len() != domain.len() {
            let missing = domain.get(images.len().min(domain.len().saturating_sub(1)));
            return Err(Error::UndefinedOnElement(
                missing.cloned().unwrap_or(Atom::Star),
            ));
        }
        if let Some(&j) = images.iter().find(|&&j| j >= codomain.len()) {
            return Err(Error::UnknownElement(Atom::name(&j.to_string())));
        }
        Ok(Self::from_indices(domain, codomain, images))
    }

    pub fn identity(set: &FinSet) -> Self {
        Self::from_indices(set, set, (0..set.len()).collect())
    }

    pub fn domain(&self) -> &FinSet {
        &self.domain
    }

    pub fn codomain(&self) -> &FinSet {
        &self.codomain
    }

    pub fn apply(&self, a: &Atom) -> Result<&Atom> {
        let i = self
            .domain
            .index_of(a)
            .ok_or_else(|| Error::UndefinedOnElement(a.clone()))?;
        Ok(self.codomain.get(self.images[i]).unwrap())
    }

    pub fn image_index(&self, i: usize) -> usize {
        self.images[i]
    }

    /// `then ∘ self`.
    pub fn then(&self, then: &FinMap) -> Result<FinMap> {
        let images = self
            .images
            .iter()
            .map(|&j| {
                let b = self.codomain.get(j).unwrap();
                then.domain
                    .index_of(b)
                    .map(|k| then.images[k])
                    .ok_or_else(|| Error::UndefinedOnElement(b.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_indices(&self.domain, &then.codomain, images))
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.codomain.len()];
        self.images
            .iter()
            .all(|&j| !std::mem::replace(&mut seen[j], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.codomain.len()];
        for &j in &self.images {
            seen[j] = true;
        }
        seen.into_iter().all(|s| s)
    }

    /// Every map `domain -> codomain`, in lexicographic order of images.
    pub fn all(domain: &FinSet, codomain: &FinSet) -> impl Iterator<Item = FinMap> {
        let domain = domain.clone();
        let codomain = codomain.clone();
        let n = domain.len();
        let k = codomain.len();
        let total = if n == 0 {
            1
        } else if k == 0 {
            0
        } else {
            k.checked_pow(n as u32).unwrap_or(usize::MAX)
        };
        (0..total).map(move |mut code| {
            let mut images = vec![0; n];
            for slot in images.iter_mut().rev() {
                *slot = code % k;
                code /= k;
            }
            FinMap::from_indices(&domain, &codomain, images)
        })
    }
}

impl fmt::Debug for FinMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(
                self.domain
                    .iter()
                    .zip(&self.images)
                    .map(|(a, &j)| (a, self.codomain.get(j).unwrap())),
            )
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicate_elements_rejected() {
        let err = FinSet::from_names(&["a", "b", "a"]).unwrap_err();
        assert_eq!(err, Error::DuplicateElement(Atom::name("a")));
    }

    #[test]
    fn set_atoms_are_normalized() {
        let s = Atom::set([Atom::name("b"), Atom::name("a"), Atom::name("b")]);
        assert_eq!(s.to_string(), "{a,b}");
    }

    #[test]
    fn all_maps_count() {
        let x = FinSet::range(3);
        let y = FinSet::range(2);
        assert_eq!(FinMap::all(&x, &y).count(), 8);
        assert_eq!(FinMap::all(&FinSet::empty(), &y).count(), 1);
        assert_eq!(FinMap::all(&x, &FinSet::empty()).count(), 0);
    }

    #[test]
    fn partial_graph_is_rejected() {
        let x = FinSet::from_names(&["a", "b"]).unwrap();
        let err = FinMap::from_pairs(&x, &x, [(Atom::name("a"), Atom::name("b"))]).unwrap_err();
        assert_eq!(err, Error::UndefinedOnElement(Atom::name("b")));
    }

    #[test]
    fn composition_matches_pointwise() {
        let x = FinSet::range(3);
        for f in FinMap::all(&x, &x) {
            for g in FinMap::all(&x, &x) {
                let fg = f.then(&g).unwrap();
                for a in x.iter() {
                    assert_eq!(fg.apply(a).unwrap(), g.apply(f.apply(a).unwrap()).unwrap());
                }
            }
        }
    }
}
