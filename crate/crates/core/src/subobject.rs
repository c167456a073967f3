//! Shared machinery for sub-structures closed under addition and a left
//! scalar action: left ideals of a ring and submodules of a module.

use std::collections::HashSet;

use crate::bitset::BitSet;

/// An additive group with a left action of a finite ring.
pub(crate) trait Carrier: Sync {
    fn size(&self) -> usize;
    fn zero_elem(&self) -> usize;
    fn plus(&self, x: usize, y: usize) -> usize;
    fn scalar_count(&self) -> usize;
    fn act_on(&self, r: usize, x: usize) -> usize;
}

/// `R·x`; already closed under addition and the action.
pub(crate) fn cyclic<C: Carrier + ?Sized>(c: &C, x: usize) -> BitSet {
    let mut out = BitSet::new(c.size());
    for r in 0..c.scalar_count() {
        out.insert(c.act_on(r, x));
    }
    out
}

/// Adds the coset `base + v` to `acc`, where `base` is a subgroup.
fn add_coset<C: Carrier + ?Sized>(c: &C, acc: &mut BitSet, base: &BitSet, v: usize) {
    for s in base.iter() {
        acc.insert(c.plus(s, v));
    }
}

/// Sum of two subgroups, built as a union of cosets of `s`.
pub(crate) fn sum<C: Carrier + ?Sized>(c: &C, s: &BitSet, t: &BitSet) -> BitSet {
    let mut acc = s.clone();
    for v in t.iter() {
        if !acc.contains(v) {
            add_coset(c, &mut acc, s, v);
        }
    }
    acc
}

/// `s + R·x` for a closed `s`.
pub(crate) fn sum_cyclic<C: Carrier + ?Sized>(c: &C, s: &BitSet, x: usize) -> BitSet {
    let mut acc = s.clone();
    for r in 0..c.scalar_count() {
        let v = c.act_on(r, x);
        if !acc.contains(v) {
            add_coset(c, &mut acc, s, v);
        }
    }
    acc
}

/// Least closed subset containing `gens`.
pub(crate) fn closure<C: Carrier + ?Sized>(c: &C, gens: &[usize]) -> BitSet {
    let mut acc = BitSet::singleton(c.size(), c.zero_elem());
    for &g in gens {
        if !acc.contains(g) {
            acc = sum_cyclic(c, &acc, g);
        }
    }
    acc
}

/// Checks closure under addition and the action; returns a violating pair
/// description if there is one.
pub(crate) fn closure_violation<C: Carrier + ?Sized>(c: &C, set: &BitSet) -> Option<String> {
    if !set.contains(c.zero_elem()) {
        return Some("does not contain zero".into());
    }
    let members = set.to_vec();
    for &x in &members {
        for &y in &members {
            if !set.contains(c.plus(x, y)) {
                return Some(format!("{x} + {y} escapes"));
            }
        }
        for r in 0..c.scalar_count() {
            if !set.contains(c.act_on(r, x)) {
                return Some(format!("{r}·{x} escapes"));
            }
        }
    }
    None
}

/// Every closed subset, in canonical (little-endian integer) order.
///
/// Each closed subset is a finite sum of cyclic ones, so a worklist over
/// `S + R·x` reaches all of them.
pub(crate) fn all_closed<C: Carrier + ?Sized>(c: &C) -> Vec<BitSet> {
    let mut cyclics: Vec<(usize, BitSet)> = Vec::new();
    let mut seen_cyclic = HashSet::new();
    for x in 0..c.size() {
        let cx = cyclic(c, x);
        if seen_cyclic.insert(cx.clone()) {
            cyclics.push((x, cx));
        }
    }
    let zero = BitSet::singleton(c.size(), c.zero_elem());
    let mut found: HashSet<BitSet> = HashSet::new();
    found.insert(zero.clone());
    let mut queue = vec![zero];
    while let Some(s) = queue.pop() {
        for (x, cx) in &cyclics {
            if cx.is_subset(&s) {
                continue;
            }
            let j = sum_cyclic(c, &s, *x);
            if found.insert(j.clone()) {
                queue.push(j);
            }
        }
    }
    let mut out: Vec<BitSet> = found.into_iter().collect();
    out.sort();
    out
}

/// Greedy generating list for a closed `set`, scanning candidates in order.
pub(crate) fn greedy_generators<C, I>(c: &C, set: &BitSet, candidates: I) -> Vec<usize>
where
    C: Carrier + ?Sized,
    I: IntoIterator<Item = usize>,
{
    let mut gens = Vec::new();
    let mut acc = BitSet::singleton(c.size(), c.zero_elem());
    if acc == *set {
        return gens;
    }
    for x in candidates {
        if set.contains(x) && !acc.contains(x) {
            gens.push(x);
            acc = sum_cyclic(c, &acc, x);
            if acc == *set {
                break;
            }
        }
    }
    debug_assert_eq!(acc, *set);
    gens
}
