//! Serializable report shapes.

use serde::Serialize;

use torsionlab_core::bitset::BitSet;
use torsionlab_core::ideal::LeftIdeal;
use torsionlab_core::module::FiniteModule;
use torsionlab_core::torsion::AxiomViolation;

#[derive(Serialize)]
pub struct IdealJson {
    pub generators: Vec<String>,
    pub elements: Vec<String>,
}

impl IdealJson {
    pub fn of(a: &LeftIdeal) -> IdealJson {
        let ring = a.ring();
        IdealJson {
            generators: a.generators().iter().map(|&g| ring.label(g).to_string()).collect(),
            elements: a.elements().iter().map(|x| ring.label(x).to_string()).collect(),
        }
    }
}

#[derive(Serialize)]
pub struct SubmoduleJson {
    pub elements: Vec<String>,
}

impl SubmoduleJson {
    pub fn of(module: &FiniteModule, set: &BitSet) -> SubmoduleJson {
        SubmoduleJson { elements: set.iter().map(|x| module.label(x).to_string()).collect() }
    }
}

#[derive(Serialize)]
pub struct ViolationJson {
    pub axiom: u8,
    pub message: String,
}

impl ViolationJson {
    pub fn of(v: &AxiomViolation) -> ViolationJson {
        ViolationJson { axiom: v.axiom, message: v.to_string() }
    }
}

#[derive(Serialize)]
pub struct RingInfo {
    pub ring: String,
    pub order: usize,
    pub commutative: bool,
    pub zero: String,
    pub one: String,
    pub elements: Vec<String>,
    pub aliases: Vec<(String, String)>,
}

#[derive(Serialize)]
pub struct IdealEntry {
    #[serde(flatten)]
    pub ideal: IdealJson,
    pub two_sided: bool,
    pub regular: bool,
}

#[derive(Serialize)]
pub struct IdealsReport {
    pub ring: String,
    pub count: usize,
    pub ideals: Vec<IdealEntry>,
}

#[derive(Serialize)]
pub struct CheckReport {
    pub ring: String,
    pub family: Vec<IdealJson>,
    pub valid: bool,
    pub violations: Vec<ViolationJson>,
}

#[derive(Serialize)]
pub struct EnumReport {
    pub ring: String,
    pub count: usize,
    pub notions: Vec<Vec<IdealJson>>,
}

#[derive(Serialize)]
pub struct ClosureReport {
    pub ring: String,
    pub module: String,
    pub sub: SubmoduleJson,
    pub closure: Option<SubmoduleJson>,
    pub torsion_free: bool,
}

#[derive(Serialize)]
pub struct WepReport {
    pub ring: String,
    pub module: String,
    pub pass: bool,
    pub witness: Option<(SubmoduleJson, SubmoduleJson)>,
}

#[derive(Serialize)]
pub struct FailureJson {
    pub module: String,
    pub kind: String,
    pub detail: String,
}

#[derive(Serialize)]
pub struct RcmJson {
    pub ring: String,
    pub filter: Vec<IdealJson>,
    pub bound: usize,
    pub modules_total: usize,
    pub modules_checked: usize,
    pub modular: bool,
    pub wep: bool,
    pub failures: Vec<FailureJson>,
}

#[derive(Serialize)]
pub struct ERowJson {
    pub a: String,
    pub c: Vec<String>,
}

#[derive(Serialize)]
pub struct DeltaReport {
    pub ring: String,
    pub reducible: bool,
    pub reason: Option<String>,
    pub rows: Vec<ERowJson>,
    pub ideal: Option<IdealJson>,
    pub quasiidentity: Option<String>,
    pub module: Option<String>,
    pub satisfied: Option<bool>,
}

#[derive(Serialize)]
pub struct DeltaSweep {
    pub seed: u64,
    pub axioms: usize,
    pub instances: usize,
    pub disagreements: Vec<String>,
}

#[derive(Serialize)]
pub struct CorpusChecked {
    pub modules: usize,
    pub bound: usize,
}

#[derive(Serialize)]
pub struct ClassifyReport {
    pub ring: String,
    pub quasiidentities: Vec<String>,
    #[serde(rename = "I")]
    pub ideal: IdealJson,
    pub filter: Vec<IdealJson>,
    pub rcm: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violation: Option<ViolationJson>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub violations: Vec<ViolationJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lattice_witness: Option<String>,
    pub is_variety: bool,
    pub is_trivial: bool,
    pub corpus_checked: CorpusChecked,
}

#[derive(Serialize)]
pub struct CensusNotion {
    pub filter: Vec<IdealJson>,
    pub rcm_verified: bool,
    pub modules_checked: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub collapse: Option<Vec<String>>,
}

#[derive(Serialize)]
pub struct CensusEntry {
    pub spec: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub commutative: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub notions: Option<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub details: Vec<CensusNotion>,
}

#[derive(Serialize)]
pub struct CensusReport {
    pub bound: usize,
    pub entries: Vec<CensusEntry>,
}
