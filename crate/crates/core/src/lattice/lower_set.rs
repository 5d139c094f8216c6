use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};

use rand::Rng;

use super::key::{coarse_step, prerequisites, ReplacementKey};

/// A finite, downward-closed set of replacement keys.
///
/// This is the canonical identity of a diamond-kite mesh over a fixed initial
/// patch: two meshes are equal exactly when their lower sets are.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct LowerSet {
    keys: BTreeSet<ReplacementKey>,
}

impl LowerSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Wraps a set that the caller guarantees to be downward closed.
    pub(crate) fn from_closed(keys: BTreeSet<ReplacementKey>) -> Self {
        let s = LowerSet { keys };
        debug_assert!(s.is_downward_closed());
        s
    }

    /// Validates that `keys` is downward closed, returning the offending key
    /// and one of its missing prerequisites otherwise.
    pub fn try_from_keys(keys: BTreeSet<ReplacementKey>) -> Result<Self, (ReplacementKey, ReplacementKey)> {
        for k in &keys {
            for p in prerequisites(k) {
                if !keys.contains(&p) {
                    return Err((*k, p));
                }
            }
        }
        Ok(LowerSet { keys })
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn contains(&self, key: &ReplacementKey) -> bool {
        self.keys.contains(key)
    }

    /// Keys in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = &ReplacementKey> + '_ {
        self.keys.iter()
    }

    pub fn keys(&self) -> &BTreeSet<ReplacementKey> {
        &self.keys
    }

    pub fn is_downward_closed(&self) -> bool {
        self.keys
            .iter()
            .all(|k| prerequisites(k).iter().all(|p| self.keys.contains(p)))
    }

    /// Whether no other member of the set depends on `key`.
    pub fn is_maximal(&self, key: &ReplacementKey) -> bool {
        if !self.keys.contains(key) {
            return false;
        }
        // Dependents sit one level finer, at the same center or at one of the
        // six neighbours a coarse edge away.
        let finer = key.level() + 1;
        let step = coarse_step(key.level());
        std::iter::once(key.center())
            .chain((0..6).map(|m| key.center() + step.mul_unit(m)))
            .map(|c| ReplacementKey::new(c, finer))
            .filter(|k| self.keys.contains(k))
            .all(|k| !prerequisites(&k).contains(key))
    }

    pub(crate) fn insert_unchecked(&mut self, key: ReplacementKey) -> bool {
        self.keys.insert(key)
    }

    pub(crate) fn remove_unchecked(&mut self, key: &ReplacementKey) -> bool {
        self.keys.remove(key)
    }

    /// Set difference `self \ other`, as plain keys.
    pub fn difference<'a>(&'a self, other: &'a LowerSet) -> impl Iterator<Item = &'a ReplacementKey> + 'a {
        self.keys.difference(&other.keys)
    }
}

impl std::fmt::Debug for LowerSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.keys.iter()).finish()
    }
}

/// Smallest lower set containing every key in `keys`.
pub fn close_down<I: IntoIterator<Item = ReplacementKey>>(keys: I) -> LowerSet {
    let mut out = BTreeSet::new();
    let mut stack: Vec<ReplacementKey> = keys.into_iter().collect();
    while let Some(k) = stack.pop() {
        if out.insert(k) {
            stack.extend(prerequisites(&k).into_iter().filter(|p| !out.contains(p)));
        }
    }
    LowerSet::from_closed(out)
}

/// Finest common coarsening: set intersection.
pub fn meet(l1: &LowerSet, l2: &LowerSet) -> LowerSet {
    LowerSet::from_closed(l1.keys.intersection(&l2.keys).copied().collect())
}

/// Coarsest common refinement: set union.
pub fn join(l1: &LowerSet, l2: &LowerSet) -> LowerSet {
    LowerSet::from_closed(l1.keys.union(&l2.keys).copied().collect())
}

/// Dependency graph of a lower set restricted to its members: in-degrees and
/// reverse edges (prerequisite -> dependents).
fn dependency_graph(
    l: &LowerSet,
) -> (
    BTreeMap<ReplacementKey, usize>,
    BTreeMap<ReplacementKey, Vec<ReplacementKey>>,
) {
    let mut indeg = BTreeMap::new();
    let mut dependents: BTreeMap<ReplacementKey, Vec<ReplacementKey>> = BTreeMap::new();
    for k in l.iter() {
        let pre = prerequisites(k);
        indeg.insert(*k, pre.len());
        for p in pre {
            dependents.entry(p).or_default().push(*k);
        }
    }
    (indeg, dependents)
}

/// Topological order of `l` (Kahn's algorithm), smallest canonical key first
/// among the ready ones.
pub fn linearize(l: &LowerSet) -> Vec<ReplacementKey> {
    let (mut indeg, dependents) = dependency_graph(l);
    let mut ready: BinaryHeap<Reverse<ReplacementKey>> = indeg
        .iter()
        .filter(|(_, &d)| d == 0)
        .map(|(k, _)| Reverse(*k))
        .collect();
    let mut out = Vec::with_capacity(l.len());
    while let Some(Reverse(k)) = ready.pop() {
        out.push(k);
        for d in dependents.get(&k).into_iter().flatten() {
            let e = indeg.get_mut(d).expect("dependent in set");
            *e -= 1;
            if *e == 0 {
                ready.push(Reverse(*d));
            }
        }
    }
    debug_assert_eq!(out.len(), l.len());
    out
}

/// A uniformly chosen ready key at every step; any result is a valid
/// linearization.
pub fn random_linearization<R: Rng + ?Sized>(l: &LowerSet, rng: &mut R) -> Vec<ReplacementKey> {
    let (mut indeg, dependents) = dependency_graph(l);
    let mut ready: Vec<ReplacementKey> = indeg.iter().filter(|(_, &d)| d == 0).map(|(k, _)| *k).collect();
    let mut out = Vec::with_capacity(l.len());
    while !ready.is_empty() {
        let i = rng.random_range(0..ready.len());
        let k = ready.swap_remove(i);
        out.push(k);
        for d in dependents.get(&k).into_iter().flatten() {
            let e = indeg.get_mut(d).expect("dependent in set");
            *e -= 1;
            if *e == 0 {
                ready.push(*d);
            }
        }
    }
    out
}
