//! Torsion notions: axiom checks, torsion elements, relative closures, the
//! weak extension principle and relative-lattice modularity.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use rayon::prelude::*;

use crate::bitset::BitSet;
use crate::classify::Quasiidentity;
use crate::corpus::module_corpus;
use crate::error::{Error, Result};
use crate::ideal::{all_left_ideals, is_two_sided, product_ideal, same_ring, LeftIdeal};
use crate::lattice::{FiniteLattice, Modularity};
use crate::module::{
    all_submodules, direct_sum, quotient_by_set, regular, satisfies_quasiidentity, submodule_closure,
    FiniteModule, Module, Submodule,
};
use crate::ring::Ring;
use crate::subobject;

/// A family of left ideals, canonically sorted and deduplicated.
///
/// Only [`check_torsion_axioms`] hands out validated notions.
#[derive(Clone)]
pub struct TorsionNotion {
    ring: Ring,
    ideals: Vec<LeftIdeal>,
    validated: bool,
}

impl fmt::Debug for TorsionNotion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.ideals.iter()).finish()
    }
}

impl fmt::Display for TorsionNotion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.ideals.iter().map(|a| format!("({})", a.generator_labels())).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

impl PartialEq for TorsionNotion {
    fn eq(&self, other: &Self) -> bool {
        self.ideals == other.ideals
    }
}

impl Eq for TorsionNotion {}

impl TorsionNotion {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn ideals(&self) -> &[LeftIdeal] {
        &self.ideals
    }

    pub fn len(&self) -> usize {
        self.ideals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ideals.is_empty()
    }

    pub fn is_validated(&self) -> bool {
        self.validated
    }

    pub fn contains(&self, a: &LeftIdeal) -> bool {
        self.ideals.binary_search(a).is_ok()
    }

    /// A family that has not been through the axiom check.
    pub(crate) fn unchecked(ring: &Ring, mut ideals: Vec<LeftIdeal>) -> TorsionNotion {
        ideals.sort();
        ideals.dedup();
        TorsionNotion { ring: ring.clone(), ideals, validated: false }
    }

    /// `{R}`, which always passes.
    pub fn trivial(ring: &Ring) -> TorsionNotion {
        match check_torsion_axioms(ring, &[LeftIdeal::whole(ring)]) {
            Ok(AxiomCheck::Valid(f)) => f,
            other => unreachable!("{{R}} failed the torsion axioms: {other:?}"),
        }
    }

    /// The member contained in every other member, if any.
    pub fn minimum(&self) -> Option<&LeftIdeal> {
        self.ideals
            .iter()
            .find(|a| self.ideals.iter().all(|b| a.is_subset(b)))
    }

    fn require_validated(&self) -> Result<()> {
        if self.validated {
            Ok(())
        } else {
            Err(Error::Precondition("torsion notion has not been validated".into()))
        }
    }

    fn require_ring(&self, module: &FiniteModule) -> Result<()> {
        if same_ring(&self.ring, module.ring()) {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }
}

/// Which generating sets axiom (3) failed for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeneratorReading {
    /// The stored generator lists of the two members.
    Stored,
    /// Some other generating set of the second member.
    AllGeneratingSets,
}

impl fmt::Display for GeneratorReading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GeneratorReading::Stored => "stored generators",
            GeneratorReading::AllGeneratingSets => "all generating sets",
        })
    }
}

#[derive(Clone, Debug)]
pub enum Witness {
    /// The family is empty.
    Empty,
    /// `member ⊆ missing` but `missing` is not in the family.
    NotUpwardClosed { member: LeftIdeal, missing: LeftIdeal },
    /// No member lies inside `a ∩ b`.
    NotDirected { a: LeftIdeal, b: LeftIdeal },
    /// `(xy)` for these generator lists is not a member.
    Product {
        x: Vec<usize>,
        y: Vec<usize>,
        product: LeftIdeal,
        reading: GeneratorReading,
    },
    /// No member `B` has `B·r ⊆ a`.
    Translation { a: LeftIdeal, r: usize },
    /// `a·r = 0` with `r ≠ 0`.
    Regularity { a: LeftIdeal, r: usize },
}

#[derive(Clone, Debug)]
pub struct AxiomViolation {
    pub axiom: u8,
    pub witness: Witness,
}

impl AxiomViolation {
    /// Re-derives the failure from the witness alone; true iff the witness
    /// really falsifies the named axiom for `family`.
    pub fn replay(&self, ring: &Ring, family: &[LeftIdeal]) -> Result<bool> {
        let member = |a: &LeftIdeal| family.iter().any(|b| b == a);
        Ok(match (&self.axiom, &self.witness) {
            (1, Witness::Empty) => family.is_empty(),
            (1, Witness::NotUpwardClosed { member: a, missing }) => {
                member(a) && a.is_subset(missing) && !member(missing)
            }
            (2, Witness::NotDirected { a, b }) => {
                let meet = a.elements().intersection(b.elements());
                member(a) && member(b) && !family.iter().any(|c| c.elements().is_subset(&meet))
            }
            (3, Witness::Product { x, y, product, .. }) => {
                let xa = crate::ideal::left_ideal_closure(ring, x)?;
                let yb = crate::ideal::left_ideal_closure(ring, y)?;
                let p = if x.is_empty() || y.is_empty() {
                    LeftIdeal::zero(ring)
                } else {
                    product_ideal(ring, x, y)?
                };
                member(&xa) && member(&yb) && p == *product && !member(&p)
            }
            (4, Witness::Translation { a, r }) => {
                member(a) && !family.iter().any(|b| b.times(*r).is_subset(a.elements()))
            }
            (5, Witness::Regularity { a, r }) => member(a) && *r != ring.zero() && a.kills_on_right(*r),
            _ => false,
        })
    }
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lab = |a: &LeftIdeal| format!("({})", a.generator_labels());
        match &self.witness {
            Witness::Empty => write!(f, "axiom (1): family is empty"),
            Witness::NotUpwardClosed { member, missing } => write!(
                f,
                "axiom (1): {} is a member but {} ⊇ it is not",
                lab(member),
                lab(missing)
            ),
            Witness::NotDirected { a, b } => {
                write!(f, "axiom (2): no member lies inside {} ∩ {}", lab(a), lab(b))
            }
            Witness::Product { x, y, product, reading } => {
                let ring = product.ring();
                let names = |v: &[usize]| v.iter().map(|&i| ring.label(i)).collect::<Vec<_>>().join(",");
                write!(
                    f,
                    "axiom (3): X = {{{}}}, Y = {{{}}} give (XY) = {} which is not a member [{}]",
                    names(x),
                    names(y),
                    lab(product),
                    reading
                )
            }
            Witness::Translation { a, r } => write!(
                f,
                "axiom (4): no member B has B·{} ⊆ {}",
                a.ring().label(*r),
                lab(a)
            ),
            Witness::Regularity { a, r } => write!(
                f,
                "axiom (5): {}·{} = 0 but {} ≠ 0",
                lab(a),
                a.ring().label(*r),
                a.ring().label(*r)
            ),
        }
    }
}

/// Every violated axiom, at most one least witness per axiom, in axiom order.
#[derive(Clone, Debug)]
pub struct AxiomReport {
    pub family: Vec<LeftIdeal>,
    pub violations: Vec<AxiomViolation>,
}

impl AxiomReport {
    pub fn first(&self) -> &AxiomViolation {
        &self.violations[0]
    }

    pub fn violated(&self, axiom: u8) -> Option<&AxiomViolation> {
        self.violations.iter().find(|v| v.axiom == axiom)
    }

    pub fn axioms(&self) -> Vec<u8> {
        self.violations.iter().map(|v| v.axiom).collect()
    }
}

#[derive(Clone, Debug)]
pub enum AxiomCheck {
    Valid(TorsionNotion),
    Invalid(AxiomReport),
}

impl AxiomCheck {
    pub fn is_valid(&self) -> bool {
        matches!(self, AxiomCheck::Valid(_))
    }

    pub fn valid(self) -> Option<TorsionNotion> {
        match self {
            AxiomCheck::Valid(f) => Some(f),
            AxiomCheck::Invalid(_) => None,
        }
    }
}

fn canonical_family(ring: &Ring, family: &[LeftIdeal]) -> Result<Vec<LeftIdeal>> {
    if family.iter().any(|a| !same_ring(ring, a.ring())) {
        return Err(Error::RingMismatch);
    }
    let mut ideals = family.to_vec();
    ideals.sort();
    ideals.dedup();
    Ok(ideals)
}

/// Checks the five torsion-notion axioms on `family`.
pub fn check_torsion_axioms(ring: &Ring, family: &[LeftIdeal]) -> Result<AxiomCheck> {
    let ideals = canonical_family(ring, family)?;
    let all = all_left_ideals(ring);
    let mut violations = Vec::new();
    if ideals.is_empty() {
        violations.push(AxiomViolation { axiom: 1, witness: Witness::Empty });
        return Ok(AxiomCheck::Invalid(AxiomReport { family: ideals, violations }));
    }
    let member = |a: &LeftIdeal| ideals.binary_search(a).is_ok();

    // (1) upward closure
    'one: for a in &ideals {
        for b in &all {
            if a.is_subset(b) && !member(b) {
                violations.push(AxiomViolation {
                    axiom: 1,
                    witness: Witness::NotUpwardClosed { member: a.clone(), missing: b.clone() },
                });
                break 'one;
            }
        }
    }

    // (2) downward directed
    'two: for (i, a) in ideals.iter().enumerate() {
        for b in &ideals[i..] {
            let meet = a.elements().intersection(b.elements());
            if !ideals.iter().any(|c| c.elements().is_subset(&meet)) {
                violations.push(AxiomViolation {
                    axiom: 2,
                    witness: Witness::NotDirected { a: a.clone(), b: b.clone() },
                });
                break 'two;
            }
        }
    }

    // (3) product closure
    if let Some(v) = product_violation(ring, &ideals, &member)? {
        violations.push(v);
    }

    // (4) right translation
    'four: for a in &ideals {
        for r in ring.elements() {
            if !ideals.iter().any(|b| b.times(r).is_subset(a.elements())) {
                violations.push(AxiomViolation { axiom: 4, witness: Witness::Translation { a: a.clone(), r } });
                break 'four;
            }
        }
    }

    // (5) regularity
    for a in &ideals {
        if let Some(r) = regularity_witness(a) {
            violations.push(AxiomViolation { axiom: 5, witness: Witness::Regularity { a: a.clone(), r } });
            break;
        }
    }

    if violations.is_empty() {
        Ok(AxiomCheck::Valid(TorsionNotion { ring: ring.clone(), ideals, validated: true }))
    } else {
        Ok(AxiomCheck::Invalid(AxiomReport { family: ideals, violations }))
    }
}

/// Least nonzero `r` with `A·r = 0`.
pub fn regularity_witness(a: &LeftIdeal) -> Option<usize> {
    let ring = a.ring();
    ring.elements().find(|&r| r != ring.zero() && a.kills_on_right(r))
}

/// Axiom (3). `(XY)` is the left ideal generated by all `x·y`, which equals
/// `Σ_{y∈Y} (X)·y`; it depends on `X` only through `(X)`. The stored lists
/// are tried first, then every generating set `Y` of every member is reached
/// by a search over the states `((Y), Σ_{y∈Y} A·y)`.
fn product_violation(
    ring: &Ring,
    ideals: &[LeftIdeal],
    member: &dyn Fn(&LeftIdeal) -> bool,
) -> Result<Option<AxiomViolation>> {
    let product = |x: &[usize], y: &[usize]| -> Result<LeftIdeal> {
        if x.is_empty() || y.is_empty() {
            Ok(LeftIdeal::zero(ring))
        } else {
            product_ideal(ring, x, y)
        }
    };
    for a in ideals {
        for b in ideals {
            let p = product(a.generators(), b.generators())?;
            if !member(&p) {
                return Ok(Some(AxiomViolation {
                    axiom: 3,
                    witness: Witness::Product {
                        x: a.generators().to_vec(),
                        y: b.generators().to_vec(),
                        product: p,
                        reading: GeneratorReading::Stored,
                    },
                }));
            }
        }
    }
    let zero = BitSet::singleton(ring.order(), ring.zero());
    for a in ideals {
        for b in ideals {
            // state -> one generating list reaching it
            let mut seen: HashMap<(BitSet, BitSet), Vec<usize>> = HashMap::new();
            let mut queue = VecDeque::new();
            seen.insert((zero.clone(), zero.clone()), Vec::new());
            queue.push_back((zero.clone(), zero.clone()));
            let mut hits: Vec<(BitSet, Vec<usize>)> = Vec::new();
            while let Some((gen, prod)) = queue.pop_front() {
                let path = seen[&(gen.clone(), prod.clone())].clone();
                if gen == *b.elements() {
                    hits.push((prod.clone(), path.clone()));
                }
                for y in b.elements().iter() {
                    let g2 = subobject::sum_cyclic(ring.as_ref(), &gen, y);
                    let p2 = subobject::sum(ring.as_ref(), &prod, &a.times(y));
                    let key = (g2, p2);
                    if !seen.contains_key(&key) {
                        let mut next = path.clone();
                        next.push(y);
                        seen.insert(key.clone(), next);
                        queue.push_back(key);
                    }
                }
            }
            hits.sort_by(|x, y| x.0.cmp(&y.0));
            for (prod, y) in hits {
                let p = LeftIdeal::from_elements(ring, prod)
                    .map_err(|e| Error::Fault(format!("(XY) is not a left ideal: {e}")))?;
                if !member(&p) {
                    let check = product(a.generators(), &y)?;
                    if check != p {
                        return Err(Error::Fault("generator-set search disagrees with product_ideal".into()));
                    }
                    return Ok(Some(AxiomViolation {
                        axiom: 3,
                        witness: Witness::Product {
                            x: a.generators().to_vec(),
                            y,
                            product: p,
                            reading: GeneratorReading::AllGeneratingSets,
                        },
                    }));
                }
            }
        }
    }
    Ok(None)
}

/// Every torsion notion of `ring`, by increasing size and then canonically.
///
/// Members must pass regularity individually, so candidates are filtered
/// first; only upward-closed candidate subsets reach the full check.
pub fn enumerate_torsion_notions(ring: &Ring) -> Result<Vec<TorsionNotion>> {
    let all = all_left_ideals(ring);
    let candidates: Vec<LeftIdeal> = all.iter().filter(|a| regularity_witness(a).is_none()).cloned().collect();
    let k = candidates.len();
    if k > 24 {
        return Err(Error::Precondition(format!("{k} regular left ideals: enumeration too large")));
    }
    // a member's supersets must all be members, so they must be candidates
    let up: Vec<u32> = candidates
        .iter()
        .map(|a| {
            candidates
                .iter()
                .enumerate()
                .filter(|(_, b)| a.is_subset(b))
                .fold(0u32, |m, (j, _)| m | (1 << j))
        })
        .collect();
    let masks: Vec<u32> = (1u32..(1u32 << k))
        .filter(|&m| (0..k).all(|i| m & (1 << i) == 0 || up[i] & !m == 0))
        .collect();
    let mut found: Vec<TorsionNotion> = masks
        .par_iter()
        .map(|&m| {
            let fam: Vec<LeftIdeal> = (0..k).filter(|i| m & (1 << i) != 0).map(|i| candidates[i].clone()).collect();
            check_torsion_axioms(ring, &fam).map(AxiomCheck::valid)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    found.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.ideals.cmp(&y.ideals)));
    Ok(found)
}

/// The unique minimum `A` of a validated notion and its quasiidentity `q_A`.
pub fn principal_generator(f: &TorsionNotion) -> Result<(LeftIdeal, Quasiidentity)> {
    f.require_validated()?;
    let mins: Vec<&LeftIdeal> = f
        .ideals
        .iter()
        .filter(|a| f.ideals.iter().all(|b| a.is_subset(b)))
        .collect();
    match mins.as_slice() {
        [a] => Ok(((*a).clone(), Quasiidentity::new((*a).clone()))),
        _ => Err(Error::Fault(format!("validated notion {f} has no unique minimum"))),
    }
}

// ---------------------------------------------------------------------------
// Torsion elements and relative closure

fn annihilated_by_member(f: &TorsionNotion, module: &FiniteModule, x: usize) -> bool {
    f.ideals.iter().any(|a| module.annihilated_by(a, x))
}

/// `{m : A·m = 0 for some A ∈ F}`.
pub fn torsion_elements(f: &TorsionNotion, module: &Module) -> Result<Submodule> {
    f.require_ring(module)?;
    let set = BitSet::from_indices(module.order(), module.elements().filter(|&x| annihilated_by_member(f, module, x)));
    Submodule::from_elements(module, set)
        .map_err(|e| Error::Fault(format!("torsion elements do not form a submodule: {e}")))
}

/// Whether `M` satisfies `q_A` for every member `A`.
pub fn is_torsion_free(f: &TorsionNotion, module: &FiniteModule) -> Result<bool> {
    f.require_ring(module)?;
    for a in &f.ideals {
        if !satisfies_quasiidentity(module, a)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `{m : A·m ⊆ S for some A ∈ F}`; `S` must be a submodule, so testing the
/// generators of `A` is enough.
pub(crate) fn closure_bits(f: &TorsionNotion, module: &FiniteModule, s: &BitSet) -> BitSet {
    BitSet::from_indices(
        module.order(),
        module.elements().filter(|&x| {
            s.contains(x)
                || f.ideals
                    .iter()
                    .any(|a| a.generators().iter().all(|&g| s.contains(module.act(g, x))))
        }),
    )
}

fn require_in_class(f: &TorsionNotion, module: &Module) -> Result<()> {
    f.require_validated()?;
    if is_torsion_free(f, module)? {
        Ok(())
    } else {
        Err(Error::NotInClass(module.name().to_string()))
    }
}

/// Relative closure `S̄ = {m ∈ M : ∃A ∈ F, A·m ⊆ S}`.
pub fn k_closure(f: &TorsionNotion, module: &Module, s: &Submodule) -> Result<Submodule> {
    require_in_class(f, module)?;
    if !crate::module::same_module(module, s.module()) {
        return Err(Error::ModuleMismatch);
    }
    let bits = closure_bits(f, module, s.elements());
    Submodule::from_elements(module, bits)
        .map_err(|e| Error::Fault(format!("relative closure is not a submodule: {e}")))
}

/// Whether `M/S` is torsion-free, by building the quotient.
pub fn quotient_is_torsion_free(f: &TorsionNotion, module: &FiniteModule, s: &BitSet) -> Result<bool> {
    let q = quotient_by_set(module, s, "S");
    is_torsion_free(f, &q.module)
}

/// The submodules `S` with `M/S` torsion-free, as a lattice under
/// intersection and closed sum.
pub fn k_submodules(f: &TorsionNotion, module: &Module) -> Result<FiniteLattice> {
    require_in_class(f, module)?;
    let subs = all_submodules(module);
    let flags: Vec<(bool, bool)> = subs
        .par_iter()
        .map(|s| {
            let rel = quotient_is_torsion_free(f, module, s.elements())?;
            let fixed = closure_bits(f, module, s.elements()) == *s.elements();
            Ok((rel, fixed))
        })
        .collect::<Result<_>>()?;
    let mut family = Vec::new();
    for (s, (rel, fixed)) in subs.iter().zip(flags) {
        if rel != fixed {
            return Err(Error::Fault(format!(
                "{}: submodule {s} has torsion-free quotient = {rel} but closure fixed point = {fixed}",
                module.name()
            )));
        }
        if rel {
            family.push(s.elements().clone());
        }
    }
    FiniteLattice::from_family(
        family,
        |x, y| x.intersection(y),
        |x, y| closure_bits(f, module, &subobject::sum(module.as_ref(), x, y)),
    )
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Wep {
    Pass,
    /// `S ∩ T = 0` but the closures meet nontrivially.
    Witness { s: BitSet, t: BitSet },
}

impl Wep {
    pub fn is_pass(&self) -> bool {
        matches!(self, Wep::Pass)
    }
}

/// Weak extension principle: disjoint submodules have disjoint closures.
pub fn wep_check(f: &TorsionNotion, module: &Module) -> Result<Wep> {
    require_in_class(f, module)?;
    let subs: Vec<BitSet> = all_submodules(module).into_iter().map(|s| s.elements().clone()).collect();
    let closures: Vec<BitSet> = subs.par_iter().map(|s| closure_bits(f, module, s)).collect();
    let zero = BitSet::singleton(module.order(), module.zero());
    let hit = (0..subs.len()).into_par_iter().find_first(|&i| {
        (i..subs.len()).any(|j| subs[i].intersection(&subs[j]) == zero && closures[i].intersection(&closures[j]) != zero)
    });
    Ok(match hit {
        None => Wep::Pass,
        Some(i) => {
            let j = (i..subs.len())
                .find(|&j| {
                    subs[i].intersection(&subs[j]) == zero && closures[i].intersection(&closures[j]) != zero
                })
                .expect("witness found above");
            Wep::Witness { s: subs[i].clone(), t: subs[j].clone() }
        }
    })
}

#[derive(Clone, Debug)]
pub struct RcmFailure {
    pub module: String,
    pub kind: &'static str,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct RcmReport {
    pub bound: usize,
    pub modules_total: usize,
    /// Torsion-free corpus modules, the ones actually examined.
    pub modules_checked: usize,
    pub all_modular: bool,
    pub all_wep: bool,
    pub failures: Vec<RcmFailure>,
}

impl RcmReport {
    pub fn passed(&self) -> bool {
        self.all_modular && self.all_wep
    }
}

/// Relative-lattice modularity and WEP over every torsion-free corpus module.
pub fn rcm_verify(f: &TorsionNotion, bound: usize) -> Result<RcmReport> {
    f.require_validated()?;
    let corpus = module_corpus(&f.ring, bound)?;
    rcm_verify_modules(f, &corpus, bound)
}

pub(crate) fn rcm_verify_modules(f: &TorsionNotion, corpus: &[Module], bound: usize) -> Result<RcmReport> {
    let per_module: Vec<Option<(Modularity, Wep)>> = corpus
        .par_iter()
        .map(|m| {
            if !is_torsion_free(f, m)? {
                return Ok(None);
            }
            let lattice = k_submodules(f, m)?;
            Ok(Some((lattice.is_modular(), wep_check(f, m)?)))
        })
        .collect::<Result<_>>()?;
    let mut report = RcmReport {
        bound,
        modules_total: corpus.len(),
        modules_checked: 0,
        all_modular: true,
        all_wep: true,
        failures: Vec::new(),
    };
    for (m, res) in corpus.iter().zip(per_module) {
        let Some((modular, wep)) = res else { continue };
        report.modules_checked += 1;
        if let Modularity::Witness { x, y, z } = modular {
            report.all_modular = false;
            report.failures.push(RcmFailure {
                module: m.name().to_string(),
                kind: "modularity",
                detail: format!("relative lattice elements x={x}, y={y}, z={z}"),
            });
        }
        if let Wep::Witness { s, t } = wep {
            report.all_wep = false;
            report.failures.push(RcmFailure {
                module: m.name().to_string(),
                kind: "wep",
                detail: format!("S={s:?}, T={t:?}"),
            });
        }
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Replays of the constructions used to derive the axioms

/// Down-directedness through `R ⊕ R`: `(1,1)` lies in the closure of
/// `A ⊕ B`, so some member `C` has `C·(1,1) ⊆ A ⊕ B`; returns the least such
/// `C` after checking `C ⊆ A ∩ B`.
pub fn directedness_witness(f: &TorsionNotion, a: &LeftIdeal, b: &LeftIdeal) -> Result<LeftIdeal> {
    f.require_validated()?;
    if !f.contains(a) || !f.contains(b) {
        return Err(Error::NotMember);
    }
    let ring = &f.ring;
    let r = regular(ring);
    let m = direct_sum(&r, &r)?;
    let n = ring.order();
    let pair = |x: usize, y: usize| x * n + y;
    let mut gens: Vec<usize> = a.generators().iter().map(|&g| pair(g, ring.zero())).collect();
    gens.extend(b.generators().iter().map(|&g| pair(ring.zero(), g)));
    let s = submodule_closure(&m, &gens)?;
    let expected = BitSet::from_indices(
        m.order(),
        a.elements().iter().flat_map(|x| b.elements().iter().map(move |y| pair(x, y))),
    );
    if *s.elements() != expected {
        return Err(Error::Fault("A ⊕ B is not generated by the component generators".into()));
    }
    let closed = k_closure(f, &m, &s)?;
    let one_one = pair(ring.one(), ring.one());
    if !closed.contains(one_one) {
        return Err(Error::Fault(format!("(1,1) is not in the closure of {} ⊕ {}", a, b)));
    }
    let c = f
        .ideals
        .iter()
        .find(|c| c.elements().iter().all(|x| s.contains(m.act(x, one_one))))
        .ok_or_else(|| Error::Fault("no member C with C·(1,1) ⊆ A ⊕ B".into()))?;
    if !c.elements().is_subset(&a.elements().intersection(b.elements())) {
        return Err(Error::Fault(format!("{c} is not inside {a} ∩ {b}")));
    }
    Ok(c.clone())
}

/// Right translation through `M = R`, `S = A`: `1` and hence `r` lie in the
/// closure of `A`; returns the least member `B` with `B·r ⊆ A`.
pub fn translation_witness(f: &TorsionNotion, a: &LeftIdeal, r: usize) -> Result<LeftIdeal> {
    f.require_validated()?;
    if !f.contains(a) {
        return Err(Error::NotMember);
    }
    let ring = &f.ring;
    ring.check_index(r)?;
    let m = regular(ring);
    let s = Submodule::from_elements(&m, a.elements().clone())?;
    let closed = k_closure(f, &m, &s)?;
    if !closed.contains(ring.one()) || !closed.contains(r) {
        return Err(Error::Fault(format!("1 or {} missing from the closure of {a}", ring.label(r))));
    }
    f.ideals
        .iter()
        .find(|b| b.times(r).is_subset(a.elements()))
        .cloned()
        .ok_or_else(|| Error::Fault(format!("no member B with B·{} ⊆ {a}", ring.label(r))))
}

/// Additivity of the closure: given `x, y ∈ S̄`, picks annihilating members
/// `A, B`, a member `C ⊆ A ∩ B`, and checks `C·(x+y) ⊆ S`. Returns `C`.
pub fn additivity_witness(
    f: &TorsionNotion,
    module: &Module,
    s: &Submodule,
    x: usize,
    y: usize,
) -> Result<LeftIdeal> {
    require_in_class(f, module)?;
    let into_s = |a: &LeftIdeal, v: usize| module.ideal_times(a, v).is_subset(s.elements());
    let a = f.ideals.iter().find(|a| into_s(a, x)).ok_or(Error::NotMember)?;
    let b = f.ideals.iter().find(|b| into_s(b, y)).ok_or(Error::NotMember)?;
    let meet = a.elements().intersection(b.elements());
    let c = f
        .ideals
        .iter()
        .find(|c| c.elements().is_subset(&meet))
        .ok_or_else(|| Error::Fault("no member inside A ∩ B".into()))?;
    if !into_s(c, module.add(x, y)) {
        return Err(Error::Fault(format!("C·(x+y) escapes S for x={x}, y={y}")));
    }
    Ok(c.clone())
}

/// Whether the minimum of a validated notion is two-sided and idempotent.
pub fn minimum_is_idempotent_two_sided(f: &TorsionNotion) -> Result<bool> {
    let (a, _) = principal_generator(f)?;
    let gens = if a.generators().is_empty() { vec![f.ring.zero()] } else { a.generators().to_vec() };
    Ok(is_two_sided(&a) && product_ideal(&f.ring, &gens, &gens)? == a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideal::left_ideal_closure;
    use crate::module::quotient;
    use crate::ring::{cyclic, prime_field, upper_triangular};
    use std::sync::Arc;

    fn ut2() -> Ring {
        Arc::new(upper_triangular(2).unwrap())
    }

    fn a_of(r: &Ring) -> LeftIdeal {
        left_ideal_closure(r, &[4, 2]).unwrap()
    }

    fn notion(r: &Ring, fam: &[LeftIdeal]) -> TorsionNotion {
        check_torsion_axioms(r, fam).unwrap().valid().expect("valid notion")
    }

    #[test]
    fn trivial_notion_is_valid_everywhere() {
        for n in 1..=8 {
            let r: Ring = Arc::new(cyclic(n).unwrap());
            assert!(TorsionNotion::trivial(&r).is_validated());
        }
    }

    #[test]
    fn ut2_notion_is_valid() {
        let r = ut2();
        let f = notion(&r, &[a_of(&r), LeftIdeal::whole(&r)]);
        assert_eq!(f.len(), 2);
    }

    #[test]
    fn z4_with_two_violates_regularity() {
        let r: Ring = Arc::new(cyclic(4).unwrap());
        let two = left_ideal_closure(&r, &[2]).unwrap();
        let AxiomCheck::Invalid(rep) = check_torsion_axioms(&r, &[two.clone(), LeftIdeal::whole(&r)]).unwrap() else {
            panic!("expected violation");
        };
        let v5 = rep.violated(5).expect("regularity fails");
        assert!(matches!(v5.witness, Witness::Regularity { r: 2, .. }));
        for v in &rep.violations {
            assert!(v.replay(&r, &rep.family).unwrap(), "{v}");
        }
    }

    #[test]
    fn z8_with_two_violates_product_closure_first() {
        let r: Ring = Arc::new(cyclic(8).unwrap());
        let two = left_ideal_closure(&r, &[2]).unwrap();
        let AxiomCheck::Invalid(rep) = check_torsion_axioms(&r, &[two, LeftIdeal::whole(&r)]).unwrap() else {
            panic!("expected violation");
        };
        assert_eq!(rep.first().axiom, 3);
        let Witness::Product { product, reading, .. } = &rep.first().witness else { panic!() };
        assert_eq!(product.elements().to_vec(), vec![0, 4]);
        assert_eq!(*reading, GeneratorReading::Stored);
    }

    #[test]
    fn empty_and_non_filter_families() {
        let r = ut2();
        let AxiomCheck::Invalid(rep) = check_torsion_axioms(&r, &[]).unwrap() else { panic!() };
        assert_eq!(rep.axioms(), vec![1]);
        let AxiomCheck::Invalid(rep) = check_torsion_axioms(&r, &[a_of(&r)]).unwrap() else { panic!() };
        assert_eq!(rep.first().axiom, 1);
        assert!(rep.first().replay(&r, &rep.family).unwrap());
    }

    #[test]
    fn enumeration_examples() {
        let z4: Ring = Arc::new(cyclic(4).unwrap());
        let found = enumerate_torsion_notions(&z4).unwrap();
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].ideals(), &[LeftIdeal::whole(&z4)]);
        let gf2: Ring = Arc::new(prime_field(2).unwrap());
        assert_eq!(enumerate_torsion_notions(&gf2).unwrap().len(), 1);
        let r = ut2();
        let found = enumerate_torsion_notions(&r).unwrap();
        assert_eq!(found.len(), 2);
        assert_eq!(found[0].ideals(), &[LeftIdeal::whole(&r)]);
        assert_eq!(found[1].ideals(), &[a_of(&r), LeftIdeal::whole(&r)]);
    }

    #[test]
    fn torsion_elements_examples() {
        let r = ut2();
        let f = notion(&r, &[a_of(&r), LeftIdeal::whole(&r)]);
        let reg = regular(&r);
        assert!(torsion_elements(&f, &reg).unwrap().is_zero());
        assert!(is_torsion_free(&f, &reg).unwrap());
        let s = Submodule::from_elements(&reg, a_of(&r).elements().clone()).unwrap();
        let q = quotient(&reg, &s).unwrap().module;
        assert_eq!(torsion_elements(&f, &q).unwrap().size(), q.order());
        assert!(!is_torsion_free(&f, &q).unwrap());
        let t = TorsionNotion::trivial(&r);
        assert!(torsion_elements(&t, &q).unwrap().is_zero());
    }

    #[test]
    fn closure_examples() {
        let r = ut2();
        let f = notion(&r, &[a_of(&r), LeftIdeal::whole(&r)]);
        let reg = regular(&r);
        let s = Submodule::from_elements(&reg, a_of(&r).elements().clone()).unwrap();
        assert_eq!(k_closure(&f, &reg, &s).unwrap().size(), 8);
        let zero = Submodule::zero(&reg);
        assert!(k_closure(&f, &reg, &zero).unwrap().is_zero());
        let t = TorsionNotion::trivial(&r);
        assert_eq!(k_closure(&t, &reg, &s).unwrap(), s);
        let q = quotient(&reg, &s).unwrap().module;
        assert!(matches!(
            k_closure(&f, &q, &Submodule::zero(&q)),
            Err(Error::NotInClass(_))
        ));
    }

    #[test]
    fn relative_lattice_of_ut2_excludes_a() {
        let r = ut2();
        let f = notion(&r, &[a_of(&r), LeftIdeal::whole(&r)]);
        let reg = regular(&r);
        let lat = k_submodules(&f, &reg).unwrap();
        let sets = lat.elements();
        // oracle: filter the seven left ideals by torsion-freeness of R/S
        let expected: Vec<BitSet> = all_left_ideals(&r)
            .into_iter()
            .filter(|s| {
                let sub = Submodule::from_elements(&reg, s.elements().clone()).unwrap();
                let q = quotient(&reg, &sub).unwrap().module;
                (0..q.order()).all(|x| x == q.zero() || !(q.act(4, x) == q.zero() && q.act(2, x) == q.zero()))
            })
            .map(|s| s.elements().clone())
            .collect();
        assert_eq!(sets, expected.as_slice());
        assert!(sets.contains(&BitSet::full(8)));
        assert!(sets.contains(&BitSet::singleton(8, 0)));
        assert!(!sets.contains(a_of(&r).elements()));
        assert!(lat.is_modular().is_pass());
    }

    #[test]
    fn wep_and_rcm_on_ut2() {
        let r = ut2();
        let f = notion(&r, &[a_of(&r), LeftIdeal::whole(&r)]);
        assert!(wep_check(&f, &regular(&r)).unwrap().is_pass());
        let rep = rcm_verify(&f, 1).unwrap();
        assert!(rep.passed(), "{:?}", rep.failures);
        assert!(rep.modules_checked >= 1);
    }

    #[test]
    fn principal_generators() {
        let r = ut2();
        let (a, q) = principal_generator(&notion(&r, &[a_of(&r), LeftIdeal::whole(&r)])).unwrap();
        assert_eq!(a, a_of(&r));
        assert_eq!(q.render(), "(e11·x=0)∧(e12·x=0)→(x=0)");
        let (a, q) = principal_generator(&TorsionNotion::trivial(&r)).unwrap();
        assert!(a.is_whole());
        assert_eq!(q.render(), "(1x=0)→(x=0)");
        let z1: Ring = Arc::new(cyclic(1).unwrap());
        let (a, _) = principal_generator(&TorsionNotion::trivial(&z1)).unwrap();
        assert!(a.is_whole());
    }

    #[test]
    fn proof_replays_on_ut2() {
        let r = ut2();
        let f = notion(&r, &[a_of(&r), LeftIdeal::whole(&r)]);
        for a in f.ideals() {
            for b in f.ideals() {
                let c = directedness_witness(&f, a, b).unwrap();
                assert!(c.is_subset(a) && c.is_subset(b));
            }
            for x in r.elements() {
                let b = translation_witness(&f, a, x).unwrap();
                assert!(b.times(x).is_subset(a.elements()));
            }
        }
        assert!(minimum_is_idempotent_two_sided(&f).unwrap());
    }

    #[test]
    fn unvalidated_notions_are_refused() {
        let r = ut2();
        let f = TorsionNotion { ring: r.clone(), ideals: vec![LeftIdeal::whole(&r)], validated: false };
        assert!(principal_generator(&f).is_err());
        assert!(k_closure(&f, &regular(&r), &Submodule::zero(&regular(&r))).is_err());
    }
}
