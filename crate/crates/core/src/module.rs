//! Finite left modules over finite rings, and their submodules.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use serde::Deserialize;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::ideal::{same_ring, LeftIdeal, QuotientRing};
use crate::ring::{split_top_level, Ring};
use crate::subobject::{self, Carrier};

pub type Module = Arc<FiniteModule>;

/// A finite left module: an abelian group on `0..order` with an action table
/// `act[r][x] = r·x`.
#[derive(Clone)]
pub struct FiniteModule {
    ring: Ring,
    name: String,
    order: usize,
    add: Vec<u32>,
    neg: Vec<u32>,
    zero: usize,
    act: Vec<u32>,
    labels: Vec<String>,
}

impl fmt::Debug for FiniteModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteModule({}, order {})", self.name, self.order)
    }
}

impl Carrier for FiniteModule {
    fn size(&self) -> usize {
        self.order
    }
    fn zero_elem(&self) -> usize {
        self.zero
    }
    fn plus(&self, x: usize, y: usize) -> usize {
        self.add(x, y)
    }
    fn scalar_count(&self) -> usize {
        self.ring.order()
    }
    fn act_on(&self, r: usize, x: usize) -> usize {
        self.act(r, x)
    }
}

impl FiniteModule {
    /// Builds and fully validates a module from row-major tables.
    pub fn from_tables(
        ring: &Ring,
        name: impl Into<String>,
        order: usize,
        add: Vec<usize>,
        act: Vec<usize>,
        zero: usize,
    ) -> Result<FiniteModule> {
        if order == 0 {
            return Err(Error::Table("module order must be positive".into()));
        }
        if add.len() != order * order || act.len() != ring.order() * order {
            return Err(Error::Table("module table has the wrong shape".into()));
        }
        if let Some(pos) = add.iter().chain(&act).position(|&v| v >= order) {
            return Err(Error::Table(format!("table entry #{pos} is not an element index")));
        }
        if zero >= order {
            return Err(Error::IndexOutOfRange { index: zero, order });
        }
        let add: Vec<u32> = add.into_iter().map(|v| v as u32).collect();
        let neg = (0..order)
            .map(|x| {
                (0..order)
                    .find(|&y| add[x * order + y] as usize == zero)
                    .map(|y| y as u32)
                    .ok_or_else(|| Error::Table(format!("element {x} has no additive inverse")))
            })
            .collect::<Result<Vec<_>>>()?;
        let module = FiniteModule {
            ring: ring.clone(),
            name: name.into(),
            order,
            add,
            neg,
            zero,
            act: act.into_iter().map(|v| v as u32).collect(),
            labels: (0..order).map(|i| i.to_string()).collect(),
        };
        module.validate()?;
        Ok(module)
    }

    /// Reads a module table file (`{"ring", "order", "add", "act", "zero"}`);
    /// the ring is given by a ring-spec string.
    pub fn from_table_json(name: &str, text: &str) -> Result<FiniteModule> {
        let file: ModuleTableFile = serde_json::from_str(text).map_err(|e| Error::Parse {
            input: name.to_string(),
            position: e.column(),
            message: format!("line {}: {e}", e.line()),
        })?;
        let ring = Arc::new(crate::spec::build_ring(&file.ring)?);
        let add: Vec<usize> = file.add.into_iter().flatten().collect();
        let act: Vec<usize> = file.act.into_iter().flatten().collect();
        FiniteModule::from_tables(&ring, format!("table:{name}"), file.order, add, act, file.zero)
    }

    /// Exhaustive check of the abelian group and module axioms.
    pub fn validate(&self) -> Result<()> {
        let m = self.order;
        let n = self.ring.order();
        let r = &self.ring;
        let fail = |msg: String| Err(Error::Table(msg));
        for x in 0..m {
            if self.add(self.zero, x) != x {
                return fail(format!("zero is not an additive identity at {x}"));
            }
            for y in 0..m {
                if self.add(x, y) != self.add(y, x) {
                    return fail(format!("module addition is not commutative at ({x},{y})"));
                }
                let xy = self.add(x, y);
                for z in 0..m {
                    if self.add(xy, z) != self.add(x, self.add(y, z)) {
                        return fail(format!("module addition is not associative at ({x},{y},{z})"));
                    }
                }
            }
        }
        for x in 0..m {
            if self.act(r.one(), x) != x {
                return fail(format!("1·x ≠ x at x = {x}"));
            }
        }
        for a in 0..n {
            for x in 0..m {
                for y in 0..m {
                    if self.act(a, self.add(x, y)) != self.add(self.act(a, x), self.act(a, y)) {
                        return fail(format!("r(x+y) ≠ rx+ry at (r,x,y) = ({a},{x},{y})"));
                    }
                }
            }
            for b in 0..n {
                for x in 0..m {
                    if self.act(r.add(a, b), x) != self.add(self.act(a, x), self.act(b, x)) {
                        return fail(format!("(r+s)x ≠ rx+sx at (r,s,x) = ({a},{b},{x})"));
                    }
                    if self.act(r.mul(a, b), x) != self.act(a, self.act(b, x)) {
                        return fail(format!("(rs)x ≠ r(sx) at (r,s,x) = ({a},{b},{x})"));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    #[inline]
    pub fn add(&self, x: usize, y: usize) -> usize {
        self.add[x * self.order + y] as usize
    }

    #[inline]
    pub fn neg(&self, x: usize) -> usize {
        self.neg[x] as usize
    }

    #[inline]
    pub fn act(&self, r: usize, x: usize) -> usize {
        self.act[r * self.order + x] as usize
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    /// Resolves a module element from its label, an index, or a `+`-sum.
    pub fn resolve(&self, text: &str) -> Result<usize> {
        let text = text.trim();
        let parts = split_top_level(text, '+');
        if parts.len() > 1 {
            let mut acc = self.zero;
            for p in parts {
                acc = self.add(acc, self.resolve(p)?);
            }
            return Ok(acc);
        }
        if let Some(i) = self.labels.iter().position(|l| l == text) {
            return Ok(i);
        }
        if let Ok(r) = self.ring.resolve(text) {
            // Ring names denote `r·g` only in the regular module, whose labels
            // coincide with ring labels; accept aliases like `e11` there.
            if self.labels.len() == self.ring.order()
                && (0..self.order).all(|i| self.labels[i] == self.ring.label(i))
            {
                return Ok(r);
            }
        }
        match text.parse::<usize>() {
            Ok(i) if i < self.order => Ok(i),
            Ok(i) => Err(Error::IndexOutOfRange { index: i, order: self.order }),
            Err(_) => Err(Error::UnknownElement(text.to_string())),
        }
    }

    /// `A·x = {a·x : a ∈ A}`.
    pub fn ideal_times(&self, a: &LeftIdeal, x: usize) -> BitSet {
        BitSet::from_indices(self.order, a.elements().iter().map(|r| self.act(r, x)))
    }

    /// Whether `A·x = 0`, tested on the generators of `A`.
    pub fn annihilated_by(&self, a: &LeftIdeal, x: usize) -> bool {
        a.generators().iter().all(|&g| self.act(g, x) == self.zero)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ModuleTableFile {
    ring: String,
    order: usize,
    add: Vec<Vec<usize>>,
    act: Vec<Vec<usize>>,
    zero: usize,
}

// ---------------------------------------------------------------------------
// Constructions. Tables induced from validated inputs satisfy the axioms by
// construction and are not re-validated here.

/// The ring acting on itself by left multiplication.
pub fn regular(ring: &Ring) -> Module {
    let n = ring.order();
    let mut add = Vec::with_capacity(n * n);
    let mut act = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            add.push(ring.add(x, y) as u32);
            act.push(ring.mul(x, y) as u32);
        }
    }
    Arc::new(FiniteModule {
        ring: ring.clone(),
        name: "R".into(),
        order: n,
        add,
        neg: (0..n).map(|x| ring.neg(x) as u32).collect(),
        zero: ring.zero(),
        act,
        labels: (0..n).map(|x| ring.label(x).to_string()).collect(),
    })
}

/// The one-element module.
pub fn zero_module(ring: &Ring) -> Module {
    Arc::new(FiniteModule {
        ring: ring.clone(),
        name: "0".into(),
        order: 1,
        add: vec![0],
        neg: vec![0],
        zero: 0,
        act: vec![0; ring.order()],
        labels: vec!["0".into()],
    })
}

/// `M₁ ⊕ M₂` with `(x, y) ↦ x·|M₂| + y`.
pub fn direct_sum(left: &FiniteModule, right: &FiniteModule) -> Result<Module> {
    if !same_ring(&left.ring, &right.ring) {
        return Err(Error::RingMismatch);
    }
    let (m1, m2) = (left.order, right.order);
    let m = m1 * m2;
    if m > u32::MAX as usize {
        return Err(Error::Precondition("direct sum too large".into()));
    }
    let split = |i: usize| (i / m2, i % m2);
    let mut add = Vec::with_capacity(m * m);
    for x in 0..m {
        let (x1, x2) = split(x);
        for y in 0..m {
            let (y1, y2) = split(y);
            add.push((left.add(x1, y1) * m2 + right.add(x2, y2)) as u32);
        }
    }
    let n = left.ring.order();
    let mut act = Vec::with_capacity(n * m);
    for r in 0..n {
        for x in 0..m {
            let (x1, x2) = split(x);
            act.push((left.act(r, x1) * m2 + right.act(r, x2)) as u32);
        }
    }
    let neg = (0..m)
        .map(|x| {
            let (x1, x2) = split(x);
            (left.neg(x1) * m2 + right.neg(x2)) as u32
        })
        .collect();
    let labels = (0..m)
        .map(|x| {
            let (x1, x2) = split(x);
            format!("({},{})", left.label(x1), right.label(x2))
        })
        .collect();
    Ok(Arc::new(FiniteModule {
        ring: left.ring.clone(),
        name: format!("{}⊕{}", left.name, right.name),
        order: m,
        add,
        neg,
        zero: left.zero * m2 + right.zero,
        act,
        labels,
    }))
}

/// `R^k` for `k ≥ 1`, as iterated direct sums of the regular module.
pub fn power(ring: &Ring, k: usize) -> Result<Module> {
    if k == 0 {
        return Ok(zero_module(ring));
    }
    let base = regular(ring);
    let mut acc = base.clone();
    for _ in 1..k {
        acc = direct_sum(&acc, &base)?;
    }
    let mut out = (*acc).clone();
    out.name = if k == 1 { "R".into() } else { format!("R^{k}") };
    Ok(Arc::new(out))
}

/// `M/S` with the coset map; coset `k` is represented by its least element.
#[derive(Clone, Debug)]
pub struct QuotientModule {
    pub module: Module,
    pub projection: Vec<usize>,
    pub representatives: Vec<usize>,
}

pub fn quotient(module: &Module, sub: &Submodule) -> Result<QuotientModule> {
    if !same_module(module, &sub.module) {
        return Err(Error::ModuleMismatch);
    }
    Ok(quotient_by_set(module, &sub.elements, &sub.generator_labels()))
}

pub(crate) fn quotient_by_set(module: &FiniteModule, sub: &BitSet, tag: &str) -> QuotientModule {
    let m = module.order;
    let mut projection = vec![usize::MAX; m];
    let mut reps = Vec::new();
    for x in 0..m {
        if projection[x] != usize::MAX {
            continue;
        }
        let k = reps.len();
        reps.push(x);
        for s in sub.iter() {
            projection[module.add(x, s)] = k;
        }
    }
    let q = reps.len();
    let mut add = Vec::with_capacity(q * q);
    for &x in &reps {
        for &y in &reps {
            add.push(projection[module.add(x, y)] as u32);
        }
    }
    let n = module.ring.order();
    let mut act = Vec::with_capacity(n * q);
    for r in 0..n {
        for &x in &reps {
            act.push(projection[module.act(r, x)] as u32);
        }
    }
    let neg = reps.iter().map(|&x| projection[module.neg(x)] as u32).collect();
    let zero = projection[module.zero];
    let labels = (0..q)
        .map(|k| {
            if k == zero {
                "0".to_string()
            } else {
                format!("[{}]", module.label(reps[k]))
            }
        })
        .collect();
    QuotientModule {
        module: Arc::new(FiniteModule {
            ring: module.ring.clone(),
            name: format!("{}/<{}>", module.name, tag),
            order: q,
            add,
            neg,
            zero,
            act,
            labels,
        }),
        projection,
        representatives: reps,
    }
}

/// Views an `R`-module annihilated by `I` as an `R/I`-module.
pub fn transport_module(module: &FiniteModule, quotient: &QuotientRing) -> Result<Module> {
    if !same_ring(&module.ring, quotient.source()) {
        return Err(Error::RingMismatch);
    }
    for i in quotient.ideal().elements().iter() {
        if let Some(x) = module.elements().find(|&x| module.act(i, x) != module.zero) {
            return Err(Error::Precondition(format!(
                "ideal element {} does not annihilate {} (acts nontrivially on {x})",
                module.ring.label(i),
                module.name
            )));
        }
    }
    let target = quotient.ring();
    let m = module.order;
    let mut act = Vec::with_capacity(target.order() * m);
    for k in target.elements() {
        let r = quotient.representative(k);
        for x in 0..m {
            act.push(module.act(r, x) as u32);
        }
    }
    Ok(Arc::new(FiniteModule {
        ring: target.clone(),
        name: module.name.clone(),
        order: m,
        add: module.add.clone(),
        neg: module.neg.clone(),
        zero: module.zero,
        act,
        labels: module.labels.clone(),
    }))
}

// ---------------------------------------------------------------------------
// Submodules

/// A submodule as a bitset over its module's elements, with generators.
#[derive(Clone)]
pub struct Submodule {
    module: Module,
    elements: BitSet,
    generators: Vec<usize>,
}

impl PartialEq for Submodule {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements
    }
}

impl Eq for Submodule {}

impl Hash for Submodule {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.elements.hash(state);
    }
}

impl Ord for Submodule {
    fn cmp(&self, other: &Self) -> Ordering {
        self.elements.cmp(&other.elements)
    }
}

impl PartialOrd for Submodule {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Submodule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Submodule{:?}", self.elements)
    }
}

impl fmt::Display for Submodule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let elems: Vec<&str> = self.elements.iter().map(|x| self.module.label(x)).collect();
        write!(f, "{{{}}}", elems.join(", "))
    }
}

impl Submodule {
    pub fn module(&self) -> &Module {
        &self.module
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

    pub fn is_subset(&self, other: &Submodule) -> bool {
        self.elements.is_subset(&other.elements)
    }

    pub(crate) fn from_closed(module: &Module, elements: BitSet) -> Submodule {
        let generators = subobject::greedy_generators(module.as_ref(), &elements, 0..module.order);
        Submodule {
            module: module.clone(),
            elements,
            generators,
        }
    }

    /// Validates closure and picks canonical generators.
    pub fn from_elements(module: &Module, elements: BitSet) -> Result<Submodule> {
        if elements.universe() != module.order {
            return Err(Error::NotSubmodule("bitset universe differs from module order".into()));
        }
        if let Some(why) = subobject::closure_violation(module.as_ref(), &elements) {
            return Err(Error::NotSubmodule(why));
        }
        Ok(Self::from_closed(module, elements))
    }

    pub fn zero(module: &Module) -> Submodule {
        Self::from_closed(module, BitSet::singleton(module.order, module.zero))
    }

    pub fn whole(module: &Module) -> Submodule {
        Self::from_closed(module, BitSet::full(module.order))
    }

    pub fn generator_labels(&self) -> String {
        self.generators
            .iter()
            .map(|&g| self.module.label(g).to_string())
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn sum(&self, other: &Submodule) -> Result<Submodule> {
        self.check_same(other)?;
        let elements = subobject::sum(self.module.as_ref(), &self.elements, &other.elements);
        let mut generators = self.generators.clone();
        generators.extend_from_slice(&other.generators);
        Ok(Submodule {
            module: self.module.clone(),
            elements,
            generators,
        })
    }

    pub fn intersect(&self, other: &Submodule) -> Result<Submodule> {
        self.check_same(other)?;
        Ok(Self::from_closed(&self.module, self.elements.intersection(&other.elements)))
    }

    fn check_same(&self, other: &Submodule) -> Result<()> {
        if same_module(&self.module, &other.module) {
            Ok(())
        } else {
            Err(Error::ModuleMismatch)
        }
    }
}

pub(crate) fn same_module(a: &Module, b: &Module) -> bool {
    Arc::ptr_eq(a, b)
        || (a.order == b.order && same_ring(&a.ring, &b.ring) && a.add == b.add && a.act == b.act)
}

/// Least submodule containing `gens`; generators kept verbatim.
pub fn submodule_closure(module: &Module, gens: &[usize]) -> Result<Submodule> {
    for &g in gens {
        if g >= module.order {
            return Err(Error::IndexOutOfRange { index: g, order: module.order });
        }
    }
    Ok(Submodule {
        module: module.clone(),
        elements: subobject::closure(module.as_ref(), gens),
        generators: gens.to_vec(),
    })
}

/// Every submodule exactly once, canonically sorted.
pub fn all_submodules(module: &Module) -> Vec<Submodule> {
    subobject::all_closed(module.as_ref())
        .into_iter()
        .map(|set| Submodule::from_closed(module, set))
        .collect()
}

/// First nonzero `x` with `a·x = 0` for every generator `a` of `A`.
pub fn quasiidentity_witness(module: &FiniteModule, a: &LeftIdeal) -> Result<Option<usize>> {
    if !same_ring(&module.ring, a.ring()) {
        return Err(Error::RingMismatch);
    }
    Ok(module
        .elements()
        .find(|&x| x != module.zero && module.annihilated_by(a, x)))
}

/// Whether `M ⊨ (a₁x=0)∧…∧(a_mx=0) → (x=0)` over the generators of `A`.
pub fn satisfies_quasiidentity(module: &FiniteModule, a: &LeftIdeal) -> Result<bool> {
    Ok(quasiidentity_witness(module, a)?.is_none())
}
