//! From identities and one-variable quasiidentities over a finite ring to the
//! pair `(I, 𝒢)`, the induced filter over `R/I`, and an RCM verdict.

use std::fmt;

use rayon::prelude::*;

use crate::corpus::{module_corpus, DEFAULT_BOUND};
use crate::error::{Error, Result};
use crate::ideal::{
    all_left_ideals, annihilator, idempotent_generator, is_two_sided, left_ideal_closure, product_ideal,
    quotient_ring, same_ring, two_sided_closure, LeftIdeal, QuotientRing, TwoSidedIdeal,
};
use crate::lattice::{FiniteLattice, Modularity};
use crate::module::{quotient_by_set, regular, satisfies_quasiidentity, transport_module, FiniteModule, Module};
use crate::ring::Ring;
use crate::torsion::{
    check_torsion_axioms, is_torsion_free, principal_generator, AxiomCheck, AxiomReport, TorsionNotion,
};

/// `q_A : (a₁x=0) ∧ … ∧ (a_mx=0) → (x=0)` over the generator list of `A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quasiidentity {
    ideal: LeftIdeal,
}

impl Quasiidentity {
    pub fn new(ideal: LeftIdeal) -> Quasiidentity {
        Quasiidentity { ideal }
    }

    pub fn from_generators(ring: &Ring, gens: &[usize]) -> Result<Quasiidentity> {
        if gens.is_empty() {
            return Err(Error::EmptyGenerators);
        }
        Ok(Quasiidentity::new(left_ideal_closure(ring, gens)?))
    }

    pub fn ideal(&self) -> &LeftIdeal {
        &self.ideal
    }

    pub fn holds(&self, module: &FiniteModule) -> Result<bool> {
        satisfies_quasiidentity(module, &self.ideal)
    }

    /// `(e11·x=0)∧(e12·x=0)→(x=0)`; numeric coefficients are written
    /// without the dot, as in `(1x=0)`.
    pub fn render(&self) -> String {
        emit_quasiidentity(&self.ideal)
    }
}

impl fmt::Display for Quasiidentity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

pub fn emit_quasiidentity(a: &LeftIdeal) -> String {
    let ring = a.ring();
    let atoms: Vec<String> = a
        .generators()
        .iter()
        .map(|&g| {
            let label = ring.label(g);
            if label.chars().all(|c| c.is_ascii_digit()) {
                format!("({label}x=0)")
            } else if label.contains('+') && !label.starts_with('(') {
                format!("(({label})·x=0)")
            } else {
                format!("({label}·x=0)")
            }
        })
        .collect();
    let premise = if atoms.is_empty() { "⊤".to_string() } else { atoms.join("∧") };
    format!("{premise}→(x=0)")
}

/// `Σ r_i x_i = 0`, stored by its coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearIdentity {
    pub coefficients: Vec<usize>,
}

/// Two-sided ideal generated by every coefficient of every identity.
pub fn identities_to_ideal(ring: &Ring, identities: &[LinearIdentity]) -> Result<TwoSidedIdeal> {
    let gens: Vec<usize> = identities.iter().flat_map(|i| i.coefficients.iter().copied()).collect();
    two_sided_closure(ring, &gens)
}

fn cyclic_quotient(ring: &Ring, s: &LeftIdeal) -> Module {
    quotient_by_set(regular(ring).as_ref(), s.elements(), &s.generator_labels()).module
}

fn satisfies_all(module: &FiniteModule, qs: &[Quasiidentity]) -> Result<bool> {
    for q in qs {
        if !q.holds(module)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `I`: the least left ideal `S ⊇ Σ` with `R/S ⊨ Q`, checked to be
/// two-sided and to equal the annihilator of `R/I`.
pub fn annihilator_of_quasivariety(ring: &Ring, qs: &[Quasiidentity], sigma: &TwoSidedIdeal) -> Result<TwoSidedIdeal> {
    if qs.iter().any(|q| !same_ring(ring, q.ideal.ring())) || !same_ring(ring, sigma.ring()) {
        return Err(Error::RingMismatch);
    }
    let candidates: Vec<LeftIdeal> = all_left_ideals(ring)
        .into_par_iter()
        .filter(|s| sigma.is_subset(s))
        .map(|s| Ok((satisfies_all(&cyclic_quotient(ring, &s), qs)?, s)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter_map(|(ok, s)| ok.then_some(s))
        .collect();
    let mut least = candidates
        .first()
        .cloned()
        .ok_or_else(|| Error::Fault("R/R fails a quasiidentity".into()))?
        .elements()
        .clone();
    for s in &candidates {
        least.intersect_with(s.elements());
    }
    let i = candidates
        .iter()
        .find(|s| *s.elements() == least)
        .cloned()
        .ok_or_else(|| Error::Fault("admissible ideals are not closed under intersection".into()))?;
    let i = TwoSidedIdeal::try_from(i).map_err(|e| Error::Fault(format!("annihilator ideal is one-sided: {e}")))?;
    let ann = annihilator(&cyclic_quotient(ring, &i))?;
    if *ann != *i {
        return Err(Error::Fault(format!("I = {} differs from Ann(R/I) = {}", *i, *ann)));
    }
    Ok(i)
}

/// The pair `(I, 𝒢)`: `𝒢` consists of left ideals of `R` containing `I`.
#[derive(Clone, Debug)]
pub struct QuasivarietyDescriptor {
    pub ring: Ring,
    pub ideal: TwoSidedIdeal,
    pub family: Vec<LeftIdeal>,
}

impl QuasivarietyDescriptor {
    /// Containment of `I`, items (1)–(4) through `R/I`, and regularity
    /// modulo `I`: `A ∈ 𝒢, A·r ⊆ I ⇒ r ∈ I`.
    pub fn validate(&self) -> Result<()> {
        for a in &self.family {
            if !self.ideal.is_subset(a) {
                return Err(Error::Fault(format!("member {a} does not contain I")));
            }
            for r in self.ring.elements() {
                if a.times(r).is_subset(self.ideal.elements()) && !self.ideal.contains(r) {
                    return Err(Error::Fault(format!(
                        "regularity modulo I fails: {a}·{} ⊆ I",
                        self.ring.label(r)
                    )));
                }
            }
        }
        let q = quotient_ring(&self.ring, &self.ideal)?;
        let projected = self.family.iter().map(|a| q.project_ideal(a)).collect::<Result<Vec<_>>>()?;
        match check_torsion_axioms(q.ring(), &projected)? {
            AxiomCheck::Valid(_) => Ok(()),
            AxiomCheck::Invalid(rep) => Err(Error::Fault(format!("projected family fails: {}", rep.first()))),
        }
    }

    /// `I·M = 0` and `M ⊨ q_A` for every `A ∈ 𝒢`.
    pub fn admits(&self, module: &FiniteModule) -> Result<bool> {
        if !same_ring(&self.ring, module.ring()) {
            return Err(Error::RingMismatch);
        }
        let killed = self
            .ideal
            .generators()
            .iter()
            .all(|&g| module.elements().all(|x| module.act(g, x) == module.zero()));
        if !killed {
            return Ok(false);
        }
        for a in &self.family {
            if !satisfies_quasiidentity(module, a)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[derive(Clone, Debug)]
pub enum Outcome {
    Rcm {
        descriptor: QuasivarietyDescriptor,
        notion: TorsionNotion,
    },
    NotRcm {
        report: AxiomReport,
        /// A corpus module of the class whose relative lattice is not
        /// modular, if the bounded corpus contains one.
        lattice_witness: Option<(String, Modularity)>,
    },
}

#[derive(Clone, Debug)]
pub struct ClassificationVerdict {
    pub ring: Ring,
    pub quasiidentities: Vec<Quasiidentity>,
    pub identities: Vec<LinearIdentity>,
    pub ideal: TwoSidedIdeal,
    pub quotient: QuotientRing,
    /// `F̄` over `R/I`, canonically sorted.
    pub filter: Vec<LeftIdeal>,
    pub outcome: Outcome,
    pub is_variety: bool,
    pub is_trivial: bool,
    pub bound: usize,
    pub corpus_checked: usize,
}

impl ClassificationVerdict {
    pub fn is_rcm(&self) -> bool {
        matches!(self.outcome, Outcome::Rcm { .. })
    }

    pub fn descriptor(&self) -> Option<&QuasivarietyDescriptor> {
        match &self.outcome {
            Outcome::Rcm { descriptor, .. } => Some(descriptor),
            Outcome::NotRcm { .. } => None,
        }
    }

    pub fn notion(&self) -> Option<&TorsionNotion> {
        match &self.outcome {
            Outcome::Rcm { notion, .. } => Some(notion),
            Outcome::NotRcm { .. } => None,
        }
    }
}

/// Classification with the default corpus bound.
pub fn classify(ring: &Ring, qs: &[Quasiidentity], identities: &[LinearIdentity]) -> Result<ClassificationVerdict> {
    classify_with_bound(ring, qs, identities, DEFAULT_BOUND)
}

pub fn classify_with_bound(
    ring: &Ring,
    qs: &[Quasiidentity],
    identities: &[LinearIdentity],
    bound: usize,
) -> Result<ClassificationVerdict> {
    let sigma = identities_to_ideal(ring, identities)?;
    let ideal = annihilator_of_quasivariety(ring, qs, &sigma)?;
    let quotient = quotient_ring(ring, &ideal)?;
    let bar = quotient.ring().clone();
    let qs_bar: Vec<Quasiidentity> = qs
        .iter()
        .map(|q| Ok(Quasiidentity::new(quotient.project_ideal(&q.ideal)?)))
        .collect::<Result<_>>()?;

    // cyclic members of the class, as R̄-modules
    let ideals_bar = all_left_ideals(&bar);
    let cyclic_members: Vec<Module> = ideals_bar
        .par_iter()
        .map(|s| {
            let m = cyclic_quotient(&bar, s);
            Ok(satisfies_all(&m, &qs_bar)?.then_some(m))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let flags: Vec<bool> = ideals_bar
        .par_iter()
        .map(|a| {
            for m in &cyclic_members {
                if !satisfies_quasiidentity(m, a)? {
                    return Ok(false);
                }
            }
            Ok(true)
        })
        .collect::<Result<_>>()?;
    let filter: Vec<LeftIdeal> = ideals_bar.iter().zip(&flags).filter(|(_, &f)| f).map(|(a, _)| a.clone()).collect();
    for a in &filter {
        if let Some(b) = ideals_bar.iter().find(|b| a.is_subset(b) && filter.binary_search(b).is_err()) {
            return Err(Error::Fault(format!("induced filter is not upward closed: {a} ⊆ {b}")));
        }
    }

    let unchecked = TorsionNotion::unchecked(&bar, filter.clone());
    let corpus = module_corpus(ring, bound)?;
    let corpus_checked = corpus_agreement(ring, identities, qs, &quotient, &unchecked, &corpus)?;

    let is_variety = filter.len() == 1 && filter[0].is_whole();
    let is_trivial = ideal.is_whole();
    let outcome = match check_torsion_axioms(&bar, &filter)? {
        AxiomCheck::Valid(notion) => {
            let family = filter.iter().map(|a| quotient.preimage(a)).collect::<Result<Vec<_>>>()?;
            let descriptor = QuasivarietyDescriptor { ring: ring.clone(), ideal: ideal.clone(), family };
            descriptor.validate()?;
            Outcome::Rcm { descriptor, notion }
        }
        AxiomCheck::Invalid(report) => {
            for v in &report.violations {
                if !v.replay(&bar, &report.family)? {
                    return Err(Error::Fault(format!("violation does not replay: {v}")));
                }
            }
            let bar_corpus = module_corpus(&bar, bound)?;
            let lattice_witness = direct_modularity_witness(&unchecked, &bar_corpus)?;
            Outcome::NotRcm { report, lattice_witness }
        }
    };
    Ok(ClassificationVerdict {
        ring: ring.clone(),
        quasiidentities: qs.to_vec(),
        identities: identities.to_vec(),
        ideal,
        quotient,
        filter,
        outcome,
        is_variety,
        is_trivial,
        bound,
        corpus_checked,
    })
}

/// Both inclusions between the presented class and the torsion-free class
/// of `F̄`, on every corpus module. Returns the number of modules compared.
fn corpus_agreement(
    ring: &Ring,
    identities: &[LinearIdentity],
    qs: &[Quasiidentity],
    quotient: &QuotientRing,
    filter: &TorsionNotion,
    corpus: &[Module],
) -> Result<usize> {
    corpus
        .par_iter()
        .map(|m| {
            let ids_hold = identities.iter().all(|id| {
                id.coefficients
                    .iter()
                    .all(|&c| m.elements().all(|x| m.act(c, x) == m.zero()))
            });
            let presented = ids_hold && satisfies_all(m, qs)?;
            let killed = quotient
                .ideal()
                .elements()
                .iter()
                .all(|i| m.elements().all(|x| m.act(i, x) == m.zero()));
            let torsion_free = killed && is_torsion_free(filter, transport_module(m, quotient)?.as_ref())?;
            if presented != torsion_free {
                return Err(Error::Fault(format!(
                    "{} over {}: presented class says {presented}, torsion-free class says {torsion_free}",
                    m.name(),
                    ring.name()
                )));
            }
            Ok(())
        })
        .collect::<Result<Vec<()>>>()
        .map(|v| v.len())
}

/// Lattice of `S ≤ M` with `M/S` in the class, built without any closure
/// formula: meets are intersections, joins the least member above the sum.
pub fn relative_lattice_direct(filter: &TorsionNotion, module: &Module) -> Result<FiniteLattice> {
    let subs = crate::module::all_submodules(module);
    let family: Vec<crate::bitset::BitSet> = subs
        .par_iter()
        .map(|s| Ok(crate::torsion::quotient_is_torsion_free(filter, module, s.elements())?.then(|| s.elements().clone())))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let fam = family.clone();
    let m = module.clone();
    FiniteLattice::from_family(
        family,
        |x, y| x.intersection(y),
        move |x, y| {
            let sum = crate::subobject::sum(m.as_ref(), x, y);
            fam.iter()
                .filter(|t| sum.is_subset(t))
                .fold(crate::bitset::BitSet::full(m.order()), |acc, t| acc.intersection(t))
        },
    )
}

fn direct_modularity_witness(filter: &TorsionNotion, corpus: &[Module]) -> Result<Option<(String, Modularity)>> {
    let results: Vec<Option<(String, Modularity)>> = corpus
        .par_iter()
        .map(|m| {
            if !is_torsion_free(filter, m)? {
                return Ok(None);
            }
            let res = relative_lattice_direct(filter, m)?.is_modular();
            Ok((!res.is_pass()).then(|| (m.name().to_string(), res)))
        })
        .collect::<Result<_>>()?;
    Ok(results.into_iter().flatten().next())
}

/// Membership in the class described by an RCM verdict.
pub fn membership(module: &FiniteModule, verdict: &ClassificationVerdict) -> Result<bool> {
    match verdict.descriptor() {
        Some(d) => d.admits(module),
        None => Err(Error::Precondition("membership needs an RCM verdict".into())),
    }
}

/// The forced collapse of a torsion notion over a commutative ring.
#[derive(Clone, Debug)]
pub struct CollapseTrace {
    pub minimum: LeftIdeal,
    pub two_sided: bool,
    pub idempotent_ideal: bool,
    pub idempotent: usize,
    pub kills_complement: bool,
    pub idempotent_is_one: bool,
    pub notion_is_trivial: bool,
}

impl CollapseTrace {
    pub fn steps(&self) -> Vec<String> {
        let ring = self.minimum.ring();
        vec![
            format!("minimum A = ({})", self.minimum.generator_labels()),
            format!("A two-sided: {}", self.two_sided),
            format!("A² = A: {}", self.idempotent_ideal),
            format!("idempotent generator e = {}", ring.label(self.idempotent)),
            format!("A·(1−e) = 0: {}", self.kills_complement),
            format!("e = 1: {}", self.idempotent_is_one),
            format!("F = {{R}}: {}", self.notion_is_trivial),
        ]
    }
}

/// Replays the collapse: minimum `A`, `A² = A`, `A = (e)` with `e² = e`,
/// `A·(1−e) = 0`, hence `e = 1` by regularity and `F = {R}`. Any failing
/// step is a fault.
pub fn commutative_collapse(ring: &Ring, f: &TorsionNotion) -> Result<CollapseTrace> {
    if !ring.is_commutative() {
        return Err(Error::Precondition("collapse needs a commutative ring".into()));
    }
    if !same_ring(ring, f.ring()) {
        return Err(Error::RingMismatch);
    }
    let (a, _) = principal_generator(f)?;
    let fault = |step: &str| Error::Fault(format!("collapse step failed over {}: {step}", ring.name()));
    let two_sided = is_two_sided(&a);
    if !two_sided {
        return Err(fault("A is not two-sided"));
    }
    let gens = if a.generators().is_empty() { vec![ring.zero()] } else { a.generators().to_vec() };
    let idempotent_ideal = product_ideal(ring, &gens, &gens)? == a;
    if !idempotent_ideal {
        return Err(fault("A² ≠ A"));
    }
    let e = idempotent_generator(ring, &a)?;
    let complement = ring.sub(ring.one(), e);
    let kills_complement = a.kills_on_right(complement);
    if !kills_complement {
        return Err(fault("A·(1−e) ≠ 0"));
    }
    let idempotent_is_one = e == ring.one();
    if !idempotent_is_one {
        return Err(fault("e ≠ 1"));
    }
    let notion_is_trivial = f.len() == 1 && f.ideals()[0].is_whole();
    if !notion_is_trivial {
        return Err(fault("F ≠ {R}"));
    }
    Ok(CollapseTrace {
        minimum: a,
        two_sided,
        idempotent_ideal,
        idempotent: e,
        kills_complement,
        idempotent_is_one,
        notion_is_trivial,
    })
}

/// `q_{XY}` for generator lists `X` and `Y`.
pub fn compose_quasiidentities(ring: &Ring, xs: &[usize], ys: &[usize]) -> Result<Quasiidentity> {
    Ok(Quasiidentity::new(product_ideal(ring, xs, ys)?))
}

/// `M ⊨ q_X ∧ M ⊨ q_Y ⇒ M ⊨ q_XY`.
pub fn composition_propagates(module: &FiniteModule, xs: &[usize], ys: &[usize]) -> Result<bool> {
    let ring = module.ring();
    let qx = Quasiidentity::from_generators(ring, xs)?;
    let qy = Quasiidentity::from_generators(ring, ys)?;
    let qxy = compose_quasiidentities(ring, xs, ys)?;
    Ok(!(qx.holds(module)? && qy.holds(module)?) || qxy.holds(module)?)
}
