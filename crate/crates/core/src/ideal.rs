//! Left and two-sided ideals of a finite ring, and quotient rings.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::Deref;
use std::sync::Arc;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::module::FiniteModule;
use crate::ring::{quotient_tables, FiniteRing, Ring};
use crate::subobject::{self, Carrier};

impl Carrier for FiniteRing {
    fn size(&self) -> usize {
        self.order()
    }
    fn zero_elem(&self) -> usize {
        self.zero()
    }
    fn plus(&self, x: usize, y: usize) -> usize {
        self.add(x, y)
    }
    fn scalar_count(&self) -> usize {
        self.order()
    }
    fn act_on(&self, r: usize, x: usize) -> usize {
        self.mul(r, x)
    }
}

pub(crate) fn same_ring(a: &Ring, b: &Ring) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// A left ideal together with the generator list it was built from.
///
/// Equality, hashing and ordering look only at the element set; the
/// generator list is presentation data.
#[derive(Clone)]
pub struct LeftIdeal {
    ring: Ring,
    elements: BitSet,
    generators: Vec<usize>,
}

impl PartialEq for LeftIdeal {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements
    }
}

impl Eq for LeftIdeal {}

impl Hash for LeftIdeal {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.elements.hash(state);
    }
}

impl Ord for LeftIdeal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.elements.cmp(&other.elements)
    }
}

impl PartialOrd for LeftIdeal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for LeftIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LeftIdeal{:?}", self.elements)
    }
}

impl fmt::Display for LeftIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<&str> = self.generators.iter().map(|&g| self.ring.label(g)).collect();
        let elems: Vec<&str> = self.elements.iter().map(|x| self.ring.label(x)).collect();
        write!(f, "({}) = {{{}}}", gens.join(","), elems.join(", "))
    }
}

impl LeftIdeal {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn elements(&self) -> &BitSet {
        &self.elements
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn contains(&self, x: usize) -> bool {
        self.elements.contains(x)
    }

    pub fn size(&self) -> usize {
        self.elements.count()
    }

    pub fn is_zero(&self) -> bool {
        self.elements.count() == 1
    }

    pub fn is_whole(&self) -> bool {
        self.elements.contains(self.ring.one())
    }

    pub fn is_subset(&self, other: &LeftIdeal) -> bool {
        self.elements.is_subset(&other.elements)
    }

    /// Wraps an already-closed set, choosing canonical generators.
    pub(crate) fn from_closed(ring: &Ring, elements: BitSet) -> LeftIdeal {
        let generators = canonical_generators(ring, &elements);
        LeftIdeal {
            ring: ring.clone(),
            elements,
            generators,
        }
    }

    /// Validates that `elements` is a left ideal and picks canonical generators.
    pub fn from_elements(ring: &Ring, elements: BitSet) -> Result<LeftIdeal> {
        if elements.universe() != ring.order() {
            return Err(Error::Precondition("bitset universe differs from ring order".into()));
        }
        if let Some(why) = subobject::closure_violation(ring.as_ref(), &elements) {
            return Err(Error::Precondition(format!("not a left ideal: {why}")));
        }
        Ok(Self::from_closed(ring, elements))
    }

    pub fn zero(ring: &Ring) -> LeftIdeal {
        Self::from_closed(ring, BitSet::singleton(ring.order(), ring.zero()))
    }

    pub fn whole(ring: &Ring) -> LeftIdeal {
        LeftIdeal {
            ring: ring.clone(),
            elements: BitSet::full(ring.order()),
            generators: vec![ring.one()],
        }
    }

    /// `{a·r : a ∈ self}`, itself a left ideal.
    pub fn times(&self, r: usize) -> BitSet {
        BitSet::from_indices(self.ring.order(), self.elements.iter().map(|a| self.ring.mul(a, r)))
    }

    /// Whether `A·r = 0`.
    pub fn kills_on_right(&self, r: usize) -> bool {
        let z = self.ring.zero();
        self.elements.iter().all(|a| self.ring.mul(a, r) == z)
    }

    /// Human-readable generator list, `e11,e12`.
    pub fn generator_labels(&self) -> String {
        self.generators
            .iter()
            .map(|&g| self.ring.label(g).to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// Canonical generators: `[1]` for the whole ring, otherwise a greedy scan
/// in the ring's preference order (matrix units before their sums).
pub(crate) fn canonical_generators(ring: &FiniteRing, elements: &BitSet) -> Vec<usize> {
    if elements.contains(ring.one()) {
        return vec![ring.one()];
    }
    subobject::greedy_generators(ring, elements, ring.preferred().iter().copied())
}

/// Least left ideal containing `gens`; the generator list is kept verbatim.
pub fn left_ideal_closure(ring: &Ring, gens: &[usize]) -> Result<LeftIdeal> {
    for &g in gens {
        ring.check_index(g)?;
    }
    Ok(LeftIdeal {
        ring: ring.clone(),
        elements: subobject::closure(ring.as_ref(), gens),
        generators: gens.to_vec(),
    })
}

/// Every left ideal of `ring` exactly once, in canonical order.
pub fn all_left_ideals(ring: &Ring) -> Vec<LeftIdeal> {
    subobject::all_closed(ring.as_ref())
        .into_iter()
        .map(|set| LeftIdeal::from_closed(ring, set))
        .collect()
}

pub fn ideal_sum(a: &LeftIdeal, b: &LeftIdeal) -> Result<LeftIdeal> {
    if !same_ring(&a.ring, &b.ring) {
        return Err(Error::RingMismatch);
    }
    let elements = subobject::sum(a.ring.as_ref(), &a.elements, &b.elements);
    let mut generators = a.generators.clone();
    generators.extend_from_slice(&b.generators);
    Ok(LeftIdeal {
        ring: a.ring.clone(),
        elements,
        generators,
    })
}

pub fn ideal_intersect(a: &LeftIdeal, b: &LeftIdeal) -> Result<LeftIdeal> {
    if !same_ring(&a.ring, &b.ring) {
        return Err(Error::RingMismatch);
    }
    Ok(LeftIdeal::from_closed(&a.ring, a.elements.intersection(&b.elements)))
}

/// Left ideal generated by the products `x·y`, `x` in `xs`, `y` in `ys`,
/// listed with `xs` as the outer index.
pub fn product_ideal(ring: &Ring, xs: &[usize], ys: &[usize]) -> Result<LeftIdeal> {
    if xs.is_empty() || ys.is_empty() {
        return Err(Error::EmptyGenerators);
    }
    for &v in xs.iter().chain(ys) {
        ring.check_index(v)?;
    }
    let products: Vec<usize> = xs
        .iter()
        .flat_map(|&x| ys.iter().map(move |&y| (x, y)))
        .map(|(x, y)| ring.mul(x, y))
        .collect();
    left_ideal_closure(ring, &products)
}

/// First `(a, r)` with `a·r ∉ A`, if any.
pub fn right_closure_witness(a: &LeftIdeal) -> Option<(usize, usize)> {
    let ring = &a.ring;
    for r in ring.elements() {
        for x in a.elements.iter() {
            if !a.contains(ring.mul(x, r)) {
                return Some((x, r));
            }
        }
    }
    None
}

pub fn is_two_sided(a: &LeftIdeal) -> bool {
    right_closure_witness(a).is_none()
}

/// A left ideal that is also closed under right multiplication.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TwoSidedIdeal(LeftIdeal);

impl fmt::Debug for TwoSidedIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TwoSided{:?}", self.0.elements)
    }
}

impl fmt::Display for TwoSidedIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl Deref for TwoSidedIdeal {
    type Target = LeftIdeal;
    fn deref(&self) -> &LeftIdeal {
        &self.0
    }
}

impl TryFrom<LeftIdeal> for TwoSidedIdeal {
    type Error = Error;

    fn try_from(a: LeftIdeal) -> Result<Self> {
        match right_closure_witness(&a) {
            None => Ok(TwoSidedIdeal(a)),
            Some((x, r)) => Err(Error::NotTwoSided(format!(
                "{}·{} = {} escapes",
                a.ring.label(x),
                a.ring.label(r),
                a.ring.label(a.ring.mul(x, r))
            ))),
        }
    }
}

impl TwoSidedIdeal {
    pub fn as_left(&self) -> &LeftIdeal {
        &self.0
    }

    pub fn into_left(self) -> LeftIdeal {
        self.0
    }

    pub fn zero(ring: &Ring) -> TwoSidedIdeal {
        TwoSidedIdeal(LeftIdeal::zero(ring))
    }

    pub fn whole(ring: &Ring) -> TwoSidedIdeal {
        TwoSidedIdeal(LeftIdeal::whole(ring))
    }
}

/// Least two-sided ideal containing `gens`.
pub fn two_sided_closure(ring: &Ring, gens: &[usize]) -> Result<TwoSidedIdeal> {
    for &g in gens {
        ring.check_index(g)?;
    }
    let mut acc = subobject::closure(ring.as_ref(), gens);
    loop {
        let mut grown = acc.clone();
        for x in acc.iter() {
            for r in ring.elements() {
                let xr = ring.mul(x, r);
                if !grown.contains(xr) {
                    grown = subobject::sum_cyclic(ring.as_ref(), &grown, xr);
                }
            }
        }
        if grown == acc {
            break;
        }
        acc = grown;
    }
    Ok(TwoSidedIdeal(LeftIdeal::from_closed(ring, acc)))
}

/// Scalars acting as zero on every element of `module`.
pub fn annihilator(module: &FiniteModule) -> Result<TwoSidedIdeal> {
    let ring = module.ring();
    let z = module.zero();
    let set = BitSet::from_indices(
        ring.order(),
        ring.elements()
            .filter(|&r| (0..module.order()).all(|x| module.act(r, x) == z)),
    );
    let left = LeftIdeal::from_elements(ring, set)
        .map_err(|e| Error::Fault(format!("annihilator is not a left ideal: {e}")))?;
    TwoSidedIdeal::try_from(left)
        .map_err(|e| Error::Fault(format!("annihilator is not two-sided: {e}")))
}

/// An idempotent `e` with `(e) = A`, for commutative `R` and `A² = A`.
///
/// Returns the least such index.
pub fn idempotent_generator(ring: &Ring, a: &LeftIdeal) -> Result<usize> {
    if !same_ring(ring, &a.ring) {
        return Err(Error::RingMismatch);
    }
    if !ring.is_commutative() {
        return Err(Error::Precondition("idempotent generator needs a commutative ring".into()));
    }
    let gens = if a.generators.is_empty() {
        vec![ring.zero()]
    } else {
        a.generators.clone()
    };
    if product_ideal(ring, &gens, &gens)? != *a {
        return Err(Error::Precondition("ideal is not idempotent (A·A ≠ A)".into()));
    }
    a.elements
        .iter()
        .find(|&e| {
            ring.is_idempotent(e) && subobject::cyclic(ring.as_ref(), e) == a.elements
        })
        .ok_or_else(|| {
            Error::Fault(format!("no idempotent generates the idempotent ideal {a}"))
        })
}

/// `R/I` with its natural projection.
#[derive(Clone, Debug)]
pub struct QuotientRing {
    source: Ring,
    ideal: TwoSidedIdeal,
    ring: Ring,
    projection: Vec<usize>,
    representatives: Vec<usize>,
}

impl QuotientRing {
    pub fn source(&self) -> &Ring {
        &self.source
    }

    pub fn ideal(&self) -> &TwoSidedIdeal {
        &self.ideal
    }

    /// The quotient ring itself.
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    /// `ν(r)`.
    pub fn project(&self, r: usize) -> usize {
        self.projection[r]
    }

    pub fn projection(&self) -> &[usize] {
        &self.projection
    }

    /// Least element of the coset with index `k`.
    pub fn representative(&self, k: usize) -> usize {
        self.representatives[k]
    }

    pub fn project_ideal(&self, a: &LeftIdeal) -> Result<LeftIdeal> {
        if !same_ring(&self.source, &a.ring) {
            return Err(Error::RingMismatch);
        }
        let gens: Vec<usize> = a.generators.iter().map(|&g| self.projection[g]).collect();
        let image = left_ideal_closure(&self.ring, &gens)?;
        debug_assert!(a.elements.iter().all(|x| image.contains(self.projection[x])));
        Ok(image)
    }

    /// `ν⁻¹(Ā)`, with canonical generators over `R`.
    pub fn preimage(&self, a: &LeftIdeal) -> Result<LeftIdeal> {
        if !same_ring(&self.ring, &a.ring) {
            return Err(Error::RingMismatch);
        }
        let set = BitSet::from_indices(
            self.source.order(),
            self.source.elements().filter(|&r| a.contains(self.projection[r])),
        );
        Ok(LeftIdeal::from_closed(&self.source, set))
    }
}

/// Quotient of `ring` by a two-sided ideal, with the projection checked to be
/// a surjective unital ring homomorphism whose kernel is exactly `ideal`.
pub fn quotient_ring(ring: &Ring, ideal: &TwoSidedIdeal) -> Result<QuotientRing> {
    if !same_ring(ring, ideal.ring()) {
        return Err(Error::RingMismatch);
    }
    if let Some((x, r)) = right_closure_witness(ideal) {
        return Err(Error::NotTwoSided(format!("{x}·{r} escapes")));
    }
    let n = ring.order();
    let mut projection = vec![usize::MAX; n];
    let mut representatives = Vec::new();
    for x in ring.elements() {
        if projection[x] != usize::MAX {
            continue;
        }
        let k = representatives.len();
        representatives.push(x);
        for i in ideal.elements().iter() {
            projection[ring.add(x, i)] = k;
        }
    }
    let name = format!("quot({},{})", ring.name(), ideal.generator_labels());
    let quotient = quotient_tables(ring, &projection, &representatives, name)?;
    let q = QuotientRing {
        source: ring.clone(),
        ideal: ideal.clone(),
        ring: Arc::new(quotient),
        projection,
        representatives,
    };
    check_projection(&q)?;
    Ok(q)
}

fn check_projection(q: &QuotientRing) -> Result<()> {
    let (r, rb) = (&q.source, &q.ring);
    let nu = &q.projection;
    if nu[r.one()] != rb.one() {
        return Err(Error::Fault("projection does not preserve one".into()));
    }
    for x in r.elements() {
        if (nu[x] == rb.zero()) != q.ideal.contains(x) {
            return Err(Error::Fault(format!("kernel of projection differs from ideal at {x}")));
        }
        for y in r.elements() {
            if nu[r.add(x, y)] != rb.add(nu[x], nu[y]) || nu[r.mul(x, y)] != rb.mul(nu[x], nu[y]) {
                return Err(Error::Fault(format!("projection is not a homomorphism at ({x},{y})")));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{cyclic, upper_triangular};

    fn ut2() -> Ring {
        Arc::new(upper_triangular(2).unwrap())
    }

    fn set(n: usize, xs: &[usize]) -> BitSet {
        BitSet::from_indices(n, xs.iter().copied())
    }

    #[test]
    fn closure_examples() {
        let z4 = Arc::new(cyclic(4).unwrap());
        assert_eq!(left_ideal_closure(&z4, &[2]).unwrap().elements(), &set(4, &[0, 2]));
        let r = ut2();
        let a = left_ideal_closure(&r, &[4, 2]).unwrap();
        assert_eq!(a.elements(), &set(8, &[0, 2, 4, 6]));
        assert_eq!(a.generators(), &[4, 2]);
        assert!(left_ideal_closure(&r, &[r.one()]).unwrap().is_whole());
    }

    #[test]
    fn ut2_has_seven_left_ideals() {
        let r = ut2();
        let ideals = all_left_ideals(&r);
        let sets: Vec<Vec<usize>> = ideals.iter().map(|a| a.elements().to_vec()).collect();
        assert_eq!(
            sets,
            vec![
                vec![0],
                vec![0, 2],
                vec![0, 1, 2, 3],
                vec![0, 4],
                vec![0, 6],
                vec![0, 2, 4, 6],
                (0..8).collect::<Vec<_>>(),
            ]
        );
        let a = &ideals[5];
        assert_eq!(a.generators(), &[4, 2]);
    }

    #[test]
    fn small_commutative_ideal_counts() {
        let z4 = Arc::new(cyclic(4).unwrap());
        assert_eq!(all_left_ideals(&z4).len(), 3);
        let gf2 = Arc::new(cyclic(2).unwrap());
        assert_eq!(all_left_ideals(&gf2).len(), 2);
    }

    #[test]
    fn sums_and_intersections_in_ut2() {
        let r = ut2();
        let e11 = left_ideal_closure(&r, &[4]).unwrap();
        let e12 = left_ideal_closure(&r, &[2]).unwrap();
        let a = ideal_sum(&e11, &e12).unwrap();
        assert_eq!(a.elements(), &set(8, &[0, 2, 4, 6]));
        let re22 = left_ideal_closure(&r, &[1]).unwrap();
        assert_eq!(ideal_intersect(&a, &re22).unwrap().elements(), &set(8, &[0, 2]));
        assert_eq!(ideal_intersect(&a, &LeftIdeal::whole(&r)).unwrap(), a);
    }

    #[test]
    fn product_ideal_examples() {
        let r = ut2();
        let p = product_ideal(&r, &[4, 2], &[4, 2]).unwrap();
        assert_eq!(p.generators(), &[4, 2, 0, 0]);
        assert_eq!(p.elements(), &set(8, &[0, 2, 4, 6]));
        let z8 = Arc::new(cyclic(8).unwrap());
        assert_eq!(product_ideal(&z8, &[2], &[2]).unwrap().elements(), &set(8, &[0, 4]));
        let y = left_ideal_closure(&r, &[2, 1]).unwrap();
        assert_eq!(product_ideal(&r, &[r.one()], &[2, 1]).unwrap(), y);
        assert!(matches!(product_ideal(&r, &[], &[1]), Err(Error::EmptyGenerators)));
    }

    #[test]
    fn two_sidedness() {
        let r = ut2();
        let a = left_ideal_closure(&r, &[4, 2]).unwrap();
        assert!(is_two_sided(&a));
        let e11 = left_ideal_closure(&r, &[4]).unwrap();
        assert_eq!(right_closure_witness(&e11), Some((4, 2)));
        assert!(TwoSidedIdeal::try_from(e11).is_err());
        let z6 = Arc::new(cyclic(6).unwrap());
        assert!(all_left_ideals(&z6).iter().all(is_two_sided));
        assert_eq!(two_sided_closure(&r, &[2]).unwrap().elements(), &set(8, &[0, 2]));
        // e11 generates A as a two-sided ideal: e11·e12 = e12.
        assert_eq!(two_sided_closure(&r, &[4]).unwrap().elements(), &set(8, &[0, 2, 4, 6]));
    }

    #[test]
    fn idempotent_generators_in_z6() {
        let z6 = Arc::new(cyclic(6).unwrap());
        let three = left_ideal_closure(&z6, &[3]).unwrap();
        assert_eq!(idempotent_generator(&z6, &three).unwrap(), 3);
        let two = left_ideal_closure(&z6, &[2]).unwrap();
        assert_eq!(idempotent_generator(&z6, &two).unwrap(), 4);
        assert_eq!(idempotent_generator(&z6, &LeftIdeal::whole(&z6)).unwrap(), 1);
        let z4 = Arc::new(cyclic(4).unwrap());
        let not_idem = left_ideal_closure(&z4, &[2]).unwrap();
        assert!(matches!(idempotent_generator(&z4, &not_idem), Err(Error::Precondition(_))));
        assert!(matches!(idempotent_generator(&ut2(), &LeftIdeal::whole(&ut2())), Err(Error::Precondition(_))));
    }

    #[test]
    fn quotient_examples() {
        let z4 = Arc::new(cyclic(4).unwrap());
        let i = two_sided_closure(&z4, &[2]).unwrap();
        let q = quotient_ring(&z4, &i).unwrap();
        assert_eq!(**q.ring(), cyclic(2).unwrap());

        let r = ut2();
        let a = TwoSidedIdeal::try_from(left_ideal_closure(&r, &[4, 2]).unwrap()).unwrap();
        let q = quotient_ring(&r, &a).unwrap();
        assert_eq!(q.ring().order(), 2);
        assert_eq!(q.project(1), q.ring().one());
        assert_eq!(q.project(4), q.ring().zero());

        let whole = quotient_ring(&r, &TwoSidedIdeal::whole(&r)).unwrap();
        assert_eq!(whole.ring().order(), 1);
        assert_eq!(whole.ring().zero(), whole.ring().one());
    }

    #[test]
    fn preimage_contains_kernel() {
        let r = ut2();
        let i = two_sided_closure(&r, &[2]).unwrap();
        let q = quotient_ring(&r, &i).unwrap();
        for a in all_left_ideals(q.ring()) {
            let pre = q.preimage(&a).unwrap();
            assert!(i.is_subset(&pre));
            assert_eq!(q.project_ideal(&pre).unwrap(), a);
        }
    }
}
