//! Colimits of ω-chains of finite sets, and the factorization searches that
//! make "finitely presentable" and "finitely generated" concrete for finite
//! sets: a map from a finite set into a chain colimit factors through some
//! stage, essentially uniquely.

use std::collections::HashMap;
use std::fmt;

use crate::congruence::{closure_build, CongruenceIndex, GroundPresentation};
use crate::error::{Error, Result};
use crate::finset::{Atom, FinMap, FinSet};
use crate::term::{Term, TermId};
use crate::Limits;

type StageFn = Box<dyn FnMut(usize) -> Result<FinSet>>;
type LinkFn = Box<dyn FnMut(usize, &FinSet, &FinSet) -> Result<FinMap>>;

/// A chain `D_0 → D_1 → D_2 → ...` of finite sets, evaluated on demand.
pub struct OmegaChain {
    name: String,
    stage_fn: StageFn,
    link_fn: LinkFn,
    mono_flag: bool,
    stages: Vec<FinSet>,
    links: Vec<FinMap>,
}

impl fmt::Debug for OmegaChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OmegaChain")
            .field("name", &self.name)
            .field("mono_flag", &self.mono_flag)
            .field("evaluated", &self.stages.len())
            .finish()
    }
}

impl OmegaChain {
    /// `link(n, D_n, D_{n+1})` must return a map `D_n → D_{n+1}`. With
    /// `mono_flag` set, every evaluated link is checked to be injective.
    pub fn new(
        name: impl Into<String>,
        stage: impl FnMut(usize) -> Result<FinSet> + 'static,
        link: impl FnMut(usize, &FinSet, &FinSet) -> Result<FinMap> + 'static,
        mono_flag: bool,
    ) -> Self {
        OmegaChain {
            name: name.into(),
            stage_fn: Box::new(stage),
            link_fn: Box::new(link),
            mono_flag,
            stages: Vec::new(),
            links: Vec::new(),
        }
    }

    /// Every stage equal to `set`, identity links.
    pub fn constant(set: FinSet) -> Self {
        Self::new(
            format!("constant {set}"),
            move |_| Ok(set.clone()),
            |_, d, _| Ok(FinMap::identity(d)),
            true,
        )
    }

    /// `{0} ⊂ {0,1} ⊂ {0,1,2} ⊂ ...`.
    pub fn inclusions() -> Self {
        Self::new(
            "inclusions",
            |n| Ok(FinSet::range(n + 1)),
            |_, d, e| FinMap::new(d, e, Atom::clone),
            true,
        )
    }

    /// Like [`OmegaChain::inclusions`], except that the link into stage
    /// `at` sends `0` to `1`; from then on `0` is gone.
    pub fn merging(at: usize) -> Self {
        assert!(at >= 2, "stage `at - 1` must contain both 0 and 1");
        let zero = Atom::name("0");
        let one = Atom::name("1");
        Self::new(
            format!("merging at {at}"),
            move |n| {
                let full = FinSet::range(n + 1);
                Ok(if n < at {
                    full
                } else {
                    FinSet::collect(full.iter().skip(1).cloned())
                })
            },
            move |n, d, e| {
                FinMap::new(d, e, |a| {
                    if n + 1 == at && *a == zero {
                        one.clone()
                    } else {
                        a.clone()
                    }
                })
            },
            false,
        )
    }

    /// Stages `{0..k-1}, {0..k-2}, ..., {0}, {0}, ...`; each link clamps to
    /// the largest surviving element.
    pub fn shrinking(k: usize) -> Self {
        let size = move |n: usize| k.saturating_sub(n).max(1);
        Self::new(
            format!("shrinking from {k}"),
            move |n| Ok(FinSet::range(size(n))),
            move |n, d, e| {
                let top = size(n + 1) - 1;
                FinMap::from_indices_checked(d, e, (0..d.len()).map(|i| i.min(top)).collect())
            },
            false,
        )
    }

    /// Finitely many explicit stages and links; the chain is constant with
    /// identity links after the last stage.
    pub fn from_stages(
        name: impl Into<String>,
        stages: Vec<FinSet>,
        links: Vec<FinMap>,
        mono_flag: bool,
    ) -> Result<Self> {
        if stages.is_empty() {
            return Err(Error::BudgetExceeded(0));
        }
        if links.len() + 1 != stages.len() {
            return Err(Error::BudgetExceeded(links.len()));
        }
        for (n, l) in links.iter().enumerate() {
            if l.domain() != &stages[n] || l.codomain() != &stages[n + 1] {
                return Err(Error::NotACocone { stage: n });
            }
        }
        let last = stages.len() - 1;
        Ok(Self::new(
            name,
            move |n| Ok(stages[n.min(last)].clone()),
            move |n, d, _| {
                Ok(if n < last {
                    links[n].clone()
                } else {
                    FinMap::identity(d)
                })
            },
            mono_flag,
        ))
    }

    /// Stage `n` is the set of classes of `TX/E` that contain a term of
    /// depth at most `n`, each named by the first term found for it. Links
    /// are inclusions. The colimit is the whole quotient `TX/E`.
    pub fn truncations(p: &GroundPresentation, limits: &Limits) -> Result<Self> {
        let mut state = Truncations {
            index: closure_build(p, &[], limits)?,
            presentation: p.clone(),
            reps: Vec::new(),
            rep_ids: Vec::new(),
            born: Vec::new(),
            cap: limits.node_cap,
        };
        Ok(Self::new(
            "depth truncations",
            move |n| state.stage(n),
            |_, d, e| FinMap::new(d, e, Atom::clone),
            true,
        ))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn mono_flag(&self) -> bool {
        self.mono_flag
    }

    /// Number of stages evaluated so far.
    pub fn evaluated(&self) -> usize {
        self.stages.len()
    }

    pub fn stage(&mut self, n: usize) -> Result<&FinSet> {
        while self.stages.len() <= n {
            let k = self.stages.len();
            let s = (self.stage_fn)(k)?;
            self.stages.push(s);
        }
        Ok(&self.stages[n])
    }

    /// The link `D_n → D_{n+1}`.
    pub fn link(&mut self, n: usize) -> Result<&FinMap> {
        self.stage(n + 1)?;
        while self.links.len() <= n {
            let k = self.links.len();
            let l = (self.link_fn)(k, &self.stages[k], &self.stages[k + 1])?;
            if l.domain() != &self.stages[k] || l.codomain() != &self.stages[k + 1] {
                return Err(Error::NotACocone { stage: k });
            }
            if self.mono_flag && !l.is_injective() {
                return Err(Error::MonoFlagViolation { stage: k });
            }
            self.links.push(l);
        }
        Ok(&self.links[n])
    }

    /// The image of `x ∈ D_from` in `D_to`.
    pub fn push(&mut self, from: usize, to: usize, x: &Atom) -> Result<Atom> {
        let mut cur = x.clone();
        for n in from..to {
            cur = self.link(n)?.apply(&cur)?.clone();
        }
        Ok(cur)
    }
}

struct Truncations {
    index: CongruenceIndex,
    presentation: GroundPresentation,
    reps: Vec<Term<Atom>>,
    rep_ids: Vec<TermId>,
    /// Number of classes known at each evaluated stage.
    born: Vec<usize>,
    cap: usize,
}

impl Truncations {
    fn classify(&mut self, t: Term<Atom>) -> Result<()> {
        let id = self.index.add_term(&t)?;
        let root = self.index.find(id);
        for k in 0..self.rep_ids.len() {
            if self.index.find(self.rep_ids[k]) == root {
                return Ok(());
            }
        }
        if self.reps.len() >= self.cap {
            return Err(Error::BudgetExceeded(self.born.len()));
        }
        self.reps.push(t);
        self.rep_ids.push(id);
        Ok(())
    }

    fn stage(&mut self, n: usize) -> Result<FinSet> {
        while self.born.len() <= n {
            let k = self.born.len();
            let mut candidates: Vec<Term<Atom>> = self
                .presentation
                .generators
                .iter()
                .cloned()
                .map(Term::Var)
                .collect();
            if k > 0 {
                let known = self.born[k - 1];
                let fresh_from = if k >= 2 { self.born[k - 2] } else { 0 };
                for (op, arity) in self.presentation.signature.ops() {
                    if arity == 0 {
                        if k == 1 {
                            candidates.push(Term::constant(op.clone()));
                        }
                        continue;
                    }
                    let total = known.checked_pow(arity as u32).unwrap_or(usize::MAX);
                    if total > self.cap {
                        return Err(Error::BudgetExceeded(k));
                    }
                    for mut code in 0..total {
                        let mut args = Vec::with_capacity(arity);
                        for _ in 0..arity {
                            args.push(code % known);
                            code /= known;
                        }
                        args.reverse();
                        // Tuples of older classes were tried at the previous stage.
                        if k >= 2 && args.iter().all(|&a| a < fresh_from) {
                            continue;
                        }
                        candidates.push(Term::app(
                            op.clone(),
                            args.iter().map(|&a| self.reps[a].clone()).collect(),
                        ));
                    }
                }
            }
            candidates.sort();
            for t in candidates {
                self.classify(t)?;
            }
            self.born.push(self.reps.len());
        }
        Ok(FinSet::collect(
            self.reps[..self.born[n]].iter().cloned().map(Atom::term),
        ))
    }
}

/// The colimit of stages `0..=upto`: the disjoint union modulo eventual
/// merging, which for a chain is indexed by the elements of the last stage.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColimitPresentation {
    pub upto: usize,
    /// One element of stage `upto` per class.
    pub classes: FinSet,
    /// The first stage holding an element of each class.
    pub births: Vec<usize>,
    stages: Vec<FinSet>,
    links: Vec<FinMap>,
    class_of: Vec<Vec<usize>>,
}

impl ColimitPresentation {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn class_of(&self, n: usize, x: &Atom) -> Result<usize> {
        let stage = self.stages.get(n).ok_or(Error::BudgetExceeded(n))?;
        let i = stage
            .index_of(x)
            .ok_or_else(|| Error::UnknownElement(x.clone()))?;
        Ok(self.class_of[n][i])
    }

    /// The colimit injection `c_n: D_n → colim`.
    pub fn injection(&self, n: usize) -> FinMap {
        FinMap::from_indices(&self.stages[n], &self.classes, self.class_of[n].clone())
    }

    /// Every `(stage, element)` in class `c`.
    pub fn members(&self, c: usize) -> Vec<(usize, Atom)> {
        let mut out = Vec::new();
        for (n, stage) in self.stages.iter().enumerate() {
            for (i, x) in stage.iter().enumerate() {
                if self.class_of[n][i] == c {
                    out.push((n, x.clone()));
                }
            }
        }
        out
    }

    /// The element of the birth stage that names class `c`: the first one
    /// in stage order.
    pub fn birth_element(&self, c: usize) -> Atom {
        let n = self.births[c];
        let i = self.class_of[n].iter().position(|&k| k == c).unwrap();
        self.stages[n].get(i).unwrap().clone()
    }

    fn push(&self, from: usize, to: usize, x: &Atom) -> Result<Atom> {
        let mut cur = x.clone();
        for n in from..to {
            cur = self.links[n].apply(&cur)?.clone();
        }
        Ok(cur)
    }

    /// Joint surjectivity of the injections, and that members of one class
    /// meet at stage `upto` under the links.
    pub fn check_conditions(&self) -> Result<bool> {
        let mut hit = vec![false; self.len()];
        for row in &self.class_of {
            for &c in row {
                hit[c] = true;
            }
        }
        if !hit.iter().all(|&h| h) {
            return Ok(false);
        }
        for c in 0..self.len() {
            let target = self.classes.get(c).unwrap();
            for (n, x) in self.members(c) {
                if &self.push(n, self.upto, &x)? != target {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// The unique map `colim → C'` through which the legs factor, built by
    /// choosing the birth element of each class. Fails if the legs do not
    /// form a cocone.
    pub fn factor_cocone(&self, legs: &[FinMap]) -> Result<FinMap> {
        if legs.len() != self.stages.len() {
            return Err(Error::NotACocone {
                stage: legs.len().min(self.upto),
            });
        }
        let target = legs[0].codomain().clone();
        for (n, leg) in legs.iter().enumerate() {
            if leg.domain() != &self.stages[n] || leg.codomain() != &target {
                return Err(Error::NotACocone { stage: n });
            }
            if n < self.upto && self.links[n].then(&legs[n + 1])? != *leg {
                return Err(Error::NotACocone { stage: n });
            }
        }
        let images = (0..self.len())
            .map(|c| {
                let b = self.births[c];
                let img = legs[b].apply(&self.birth_element(c))?;
                Ok(target.index_of(img).unwrap())
            })
            .collect::<Result<Vec<_>>>()?;
        let f = FinMap::from_indices(&self.classes, &target, images);
        debug_assert!(
            (0..=self.upto).all(|n| self.injection(n).then(&f).ok().as_ref() == Some(&legs[n]))
        );
        Ok(f)
    }
}

/// `chain_colimit`: evaluates stages `0..=upto` and their links.
pub fn chain_colimit(
    chain: &mut OmegaChain,
    upto: usize,
    limits: &Limits,
) -> Result<ColimitPresentation> {
    let mut total = 0usize;
    for n in 0..=upto {
        total = total.saturating_add(chain.stage(n)?.len());
        if total > limits.node_cap {
            return Err(Error::BudgetExceeded(n));
        }
        if n < upto {
            chain.link(n)?;
        }
    }
    let stages: Vec<FinSet> = chain.stages[..=upto].to_vec();
    let links: Vec<FinMap> = chain.links[..upto].to_vec();
    let classes = stages[upto].clone();
    let mut class_of: Vec<Vec<usize>> = vec![Vec::new(); upto + 1];
    class_of[upto] = (0..classes.len()).collect();
    for n in (0..upto).rev() {
        class_of[n] = (0..stages[n].len())
            .map(|i| class_of[n + 1][links[n].image_index(i)])
            .collect();
    }
    let mut births = vec![usize::MAX; classes.len()];
    for (n, row) in class_of.iter().enumerate() {
        for &c in row {
            births[c] = births[c].min(n);
        }
    }
    Ok(ColimitPresentation {
        upto,
        classes,
        births,
        stages,
        links,
        class_of,
    })
}

/// A map `A → D_stage`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lift {
    pub stage: usize,
    pub map: FinMap,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Factorization {
    Found(Lift),
    /// The bound was too small; this is not a refutation.
    NotFoundWithinBound,
}

impl Factorization {
    pub fn lift(&self) -> Option<&Lift> {
        match self {
            Factorization::Found(l) => Some(l),
            Factorization::NotFoundWithinBound => None,
        }
    }
}

/// `fp_witness`: factors `f: A → colim` through the least stage `n ≤ bound`.
///
/// `f` sends the `i`-th element of `A` to the class of `images[i] = (n_i,
/// x_i)` with `x_i ∈ D_{n_i}`. The stage found is the latest birth stage
/// among the classes hit, and each element is lifted to the image of its
/// class's birth element.
pub fn fp_witness(
    a: &FinSet,
    images: &[(usize, Atom)],
    chain: &mut OmegaChain,
    bound: usize,
    limits: &Limits,
) -> Result<Factorization> {
    if images.len() != a.len() {
        let missing = a.get(images.len().min(a.len().saturating_sub(1)));
        return Err(Error::UndefinedOnElement(
            missing.cloned().unwrap_or(Atom::Star),
        ));
    }
    if images.iter().any(|(n, _)| *n > bound) {
        return Ok(Factorization::NotFoundWithinBound);
    }
    let col = chain_colimit(chain, bound, limits)?;
    let classes = images
        .iter()
        .map(|(n, x)| col.class_of(*n, x))
        .collect::<Result<Vec<_>>>()?;
    let stage = classes.iter().map(|&c| col.births[c]).max().unwrap_or(0);
    let target = chain.stage(stage)?.clone();
    let mut lifted = Vec::with_capacity(classes.len());
    for &c in &classes {
        let img = col.push(col.births[c], stage, &col.birth_element(c))?;
        lifted.push(target.index_of(&img).unwrap());
    }
    Ok(Factorization::Found(Lift {
        stage,
        map: FinMap::from_indices(a, &target, lifted),
    }))
}

/// `fg_witness_mono`: [`fp_witness`] for chains flagged as chains of
/// monomorphisms; every link up to `bound` is checked to be injective.
pub fn fg_witness_mono(
    a: &FinSet,
    images: &[(usize, Atom)],
    chain: &mut OmegaChain,
    bound: usize,
    limits: &Limits,
) -> Result<Factorization> {
    if !chain.mono_flag() {
        return Err(Error::MonoFlagUnset);
    }
    for n in 0..bound {
        chain.link(n)?;
    }
    fp_witness(a, images, chain, bound, limits)
}

/// `essential_uniqueness_check`: the least stage `m ≤ bound` at which the
/// two lifts, pushed along the chain, coincide.
pub fn essential_uniqueness_check(
    a: &FinSet,
    chain: &mut OmegaChain,
    first: &Lift,
    second: &Lift,
    bound: usize,
) -> Result<Option<usize>> {
    for l in [first, second] {
        if l.map.domain() != a {
            return Err(Error::UndefinedOnElement(
                a.iter().next().cloned().unwrap_or(Atom::Star),
            ));
        }
        if l.map.codomain() != chain.stage(l.stage)? {
            return Err(Error::NotACocone { stage: l.stage });
        }
    }
    let start = first.stage.max(second.stage);
    if start > bound {
        return Ok(None);
    }
    let mut at_start = |l: &Lift| -> Result<Vec<Atom>> {
        a.iter()
            .map(|x| {
                let y = l.map.apply(x)?.clone();
                chain.push(l.stage, start, &y)
            })
            .collect()
    };
    let mut u = at_start(first)?;
    let mut v = at_start(second)?;
    let mut m = start;
    loop {
        if u == v {
            return Ok(Some(m));
        }
        if m == bound {
            return Ok(None);
        }
        let link = chain.link(m)?;
        u = u
            .iter()
            .map(|x| link.apply(x).cloned())
            .collect::<Result<_>>()?;
        v = v
            .iter()
            .map(|x| link.apply(x).cloned())
            .collect::<Result<_>>()?;
        m += 1;
    }
}

/// Maps each element of `D_n` to the class index it represents in a
/// truncation chain, keyed by the naming term.
pub fn truncation_names(col: &ColimitPresentation) -> HashMap<Term<Atom>, usize> {
    col.classes
        .iter()
        .enumerate()
        .filter_map(|(c, x)| x.as_term().map(|t| (t.clone(), c)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signature::validate_signature;
    use crate::term::parse_term;

    fn limits() -> Limits {
        Limits::default()
    }

    fn found(f: Factorization) -> Lift {
        match f {
            Factorization::Found(l) => l,
            Factorization::NotFoundWithinBound => panic!("no lift"),
        }
    }

    #[test]
    fn constant_chain_colimit_is_the_set() {
        let set = FinSet::from_names(&["a", "b", "c"]).unwrap();
        let mut chain = OmegaChain::constant(set.clone());
        let col = chain_colimit(&mut chain, 4, &limits()).unwrap();
        assert_eq!(col.classes, set);
        assert!(col.births.iter().all(|&b| b == 0));
        assert!(col.check_conditions().unwrap());
    }

    #[test]
    fn inclusion_chain_has_one_class_per_birth() {
        let mut chain = OmegaChain::inclusions();
        let col = chain_colimit(&mut chain, 5, &limits()).unwrap();
        assert_eq!(col.len(), 6);
        assert_eq!(col.births, vec![0, 1, 2, 3, 4, 5]);
        for c in 0..6 {
            assert_eq!(col.members(c).len(), 6 - c);
        }
    }

    #[test]
    fn merging_chain_joins_zero_and_one() {
        let mut chain = OmegaChain::merging(3);
        let col = chain_colimit(&mut chain, 5, &limits()).unwrap();
        assert_eq!(col.len(), 5);
        let zero = col.class_of(0, &Atom::name("0")).unwrap();
        assert_eq!(zero, col.class_of(1, &Atom::name("1")).unwrap());
        assert_eq!(zero, col.class_of(4, &Atom::name("1")).unwrap());
        assert!(col.check_conditions().unwrap());
        // Before stage 3 the two are different elements, after it one.
        assert!(!chain.stage(3).unwrap().contains(&Atom::name("0")));
    }

    #[test]
    fn cocone_factorization() {
        let mut chain = OmegaChain::merging(2);
        let col = chain_colimit(&mut chain, 3, &limits()).unwrap();
        let target = FinSet::from_names(&["even", "odd"]).unwrap();
        let parity = |a: &Atom| {
            let k: usize = a.as_name().unwrap().parse().unwrap();
            Atom::name(if k % 2 == 1 || k == 0 { "odd" } else { "even" })
        };
        let legs: Vec<FinMap> = (0..=3)
            .map(|n| FinMap::new(chain.stage(n).unwrap(), &target, parity).unwrap())
            .collect();
        let f = col.factor_cocone(&legs).unwrap();
        for (n, leg) in legs.iter().enumerate() {
            assert_eq!(&col.injection(n).then(&f).unwrap(), leg);
        }
        // A leg that separates 0 and 1 is not a cocone.
        let bad: Vec<FinMap> = (0..=3)
            .map(|n| {
                FinMap::new(chain.stage(n).unwrap(), &target, |a| {
                    Atom::name(if a.as_name() == Some("0") {
                        "even"
                    } else {
                        "odd"
                    })
                })
                .unwrap()
            })
            .collect();
        assert!(matches!(
            col.factor_cocone(&bad),
            Err(Error::NotACocone { .. })
        ));
    }

    #[test]
    fn fp_witness_takes_latest_birth() {
        let mut chain = OmegaChain::inclusions();
        let a = FinSet::from_names(&["x"]).unwrap();
        let lift =
            found(fp_witness(&a, &[(5, Atom::name("2"))], &mut chain, 10, &limits()).unwrap());
        assert_eq!(lift.stage, 2);
        let ab = FinSet::from_names(&["a", "b"]).unwrap();
        let lift = found(
            fp_witness(
                &ab,
                &[(1, Atom::name("1")), (6, Atom::name("4"))],
                &mut chain,
                10,
                &limits(),
            )
            .unwrap(),
        );
        assert_eq!(lift.stage, 4);
        assert_eq!(lift.map.apply(&Atom::name("b")).unwrap(), &Atom::name("4"));
        assert_eq!(
            fp_witness(&a, &[(11, Atom::name("0"))], &mut chain, 10, &limits()).unwrap(),
            Factorization::NotFoundWithinBound
        );
    }

    #[test]
    fn fp_witness_on_constant_chain_is_stage_zero() {
        let set = FinSet::from_names(&["p", "q"]).unwrap();
        let mut chain = OmegaChain::constant(set);
        let a = FinSet::range(3);
        let images = vec![
            (4, Atom::name("q")),
            (2, Atom::name("p")),
            (7, Atom::name("q")),
        ];
        assert_eq!(
            found(fp_witness(&a, &images, &mut chain, 10, &limits()).unwrap()).stage,
            0
        );
    }

    #[test]
    fn merged_classes_are_born_early() {
        // 1 is born at stage 1, but joins the class of 0 which is older.
        let mut chain = OmegaChain::merging(3);
        let a = FinSet::from_names(&["x"]).unwrap();
        let lift =
            found(fp_witness(&a, &[(4, Atom::name("1"))], &mut chain, 6, &limits()).unwrap());
        assert_eq!(lift.stage, 0);
        assert_eq!(lift.map.apply(&Atom::name("x")).unwrap(), &Atom::name("0"));
    }

    #[test]
    fn mono_witness_contract() {
        let mut chain = OmegaChain::inclusions();
        let a = FinSet::from_names(&["x", "y"]).unwrap();
        let images = vec![(2, Atom::name("2")), (7, Atom::name("7"))];
        assert_eq!(
            found(fg_witness_mono(&a, &images, &mut chain, 10, &limits()).unwrap()).stage,
            7
        );

        let mut constant = OmegaChain::constant(FinSet::range(2));
        let images = vec![(3, Atom::name("1")), (0, Atom::name("0"))];
        assert_eq!(
            found(fg_witness_mono(&a, &images, &mut constant, 10, &limits()).unwrap()).stage,
            0
        );

        let mut merging = OmegaChain::merging(3);
        assert_eq!(
            fg_witness_mono(&a, &images, &mut merging, 10, &limits()),
            Err(Error::MonoFlagUnset)
        );
        let stages = vec![FinSet::range(2), FinSet::range(1)];
        let links = vec![FinMap::new(&stages[0], &stages[1], |_| Atom::name("0")).unwrap()];
        let mut lying = OmegaChain::from_stages("lying", stages, links, true).unwrap();
        assert_eq!(
            fg_witness_mono(&a, &images, &mut lying, 4, &limits()),
            Err(Error::MonoFlagViolation { stage: 0 })
        );
    }

    #[test]
    fn uniqueness_check() {
        let a = FinSet::from_names(&["x"]).unwrap();
        let mut chain = OmegaChain::merging(3);
        let at = |chain: &mut OmegaChain, label: &str| Lift {
            stage: 1,
            map: FinMap::new(&a, chain.stage(1).unwrap(), |_| Atom::name(label)).unwrap(),
        };
        let l0 = at(&mut chain, "0");
        let l1 = at(&mut chain, "1");
        assert_eq!(
            essential_uniqueness_check(&a, &mut chain, &l0, &l0, 10).unwrap(),
            Some(1)
        );
        assert_eq!(
            essential_uniqueness_check(&a, &mut chain, &l0, &l1, 10).unwrap(),
            Some(3)
        );
        assert_eq!(
            essential_uniqueness_check(&a, &mut chain, &l0, &l1, 2).unwrap(),
            None
        );

        let mut mono = OmegaChain::inclusions();
        let m0 = at(&mut mono, "0");
        let m1 = at(&mut mono, "1");
        assert_eq!(
            essential_uniqueness_check(&a, &mut mono, &m0, &m1, 10).unwrap(),
            None
        );
    }

    #[test]
    fn shrinking_chain_collapses() {
        let mut chain = OmegaChain::shrinking(4);
        let col = chain_colimit(&mut chain, 6, &limits()).unwrap();
        assert_eq!(col.len(), 1);
        assert_eq!(col.members(0).len(), 4 + 3 + 2 + 1 + 1 + 1 + 1);
        assert!(col.check_conditions().unwrap());
    }

    #[test]
    fn truncations_of_a_finite_quotient_stabilize() {
        let sig = validate_signature(&[("f", 1)]).unwrap();
        let gens = FinSet::from_names(&["a"]).unwrap();
        let rel = (
            parse_term("f(f(a))", &sig, None).unwrap(),
            parse_term("a", &sig, None).unwrap(),
        );
        let p = GroundPresentation::new(sig, gens, vec![rel]).unwrap();
        let mut chain = OmegaChain::truncations(&p, &limits()).unwrap();
        let sizes: Vec<usize> = (0..5).map(|n| chain.stage(n).unwrap().len()).collect();
        assert_eq!(sizes, vec![1, 2, 2, 2, 2]);
        let col = chain_colimit(&mut chain, 4, &limits()).unwrap();
        assert_eq!(col.births, vec![0, 1]);
        let names = truncation_names(&col);
        assert!(names.contains_key(&parse_term("f(a)", &sig_f(), None).unwrap()));
    }

    fn sig_f() -> crate::Signature {
        validate_signature(&[("f", 1)]).unwrap()
    }
}
