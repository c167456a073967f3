//! Δ-axioms for modules: reduction to `E_j(X,Ū) = a_j X + Σ c_ij U_i`,
//! the encoding left ideal, and direct semantic evaluation.
//!
//! A row stores the difference `p_j − q_j` as
//! `a_j x + b_j y + Σ c_ij u_i + Σ d_ij v_i + Σ e_ij z_i`. The axiom asserts
//! (1) `D_j(x,x,ū,ū,z̄) = 0` identically, and (2)
//! `⋀_j D_j(x,y,ū,ū,z̄) = 0 → x = y`.

use std::collections::HashSet;
use std::path::Path;
use std::sync::Arc;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::ideal::{left_ideal_closure, same_ring, LeftIdeal};
use crate::module::{satisfies_quasiidentity, FiniteModule, Module, Submodule};
use crate::ring::Ring;
use crate::spec::build_ring;
use crate::torsion::{k_closure, TorsionNotion};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaRow {
    pub a: usize,
    pub b: usize,
    pub c: Vec<usize>,
    pub d: Vec<usize>,
    pub e: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct DeltaAxiom {
    ring: Ring,
    u_arity: usize,
    z_arity: usize,
    rows: Vec<DeltaRow>,
}

/// One reduced row `E_j(X,Ū) = a X + Σ c_i U_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ERow {
    pub a: usize,
    pub c: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct ReducedDelta {
    pub rows: Vec<ERow>,
    /// `(a_0, …, a_{n−1})`, generators in row order.
    pub ideal: LeftIdeal,
}

impl DeltaAxiom {
    pub fn new(ring: &Ring, u_arity: usize, z_arity: usize, rows: Vec<DeltaRow>) -> Result<DeltaAxiom> {
        if rows.is_empty() {
            return Err(Error::Precondition("a Δ-axiom needs at least one row".into()));
        }
        for (j, row) in rows.iter().enumerate() {
            if row.c.len() != u_arity || row.d.len() != u_arity || row.e.len() != z_arity {
                return Err(Error::Precondition(format!(
                    "row {j}: arities must be c,d = {u_arity} and e = {z_arity}"
                )));
            }
            for &k in [row.a, row.b].iter().chain(&row.c).chain(&row.d).chain(&row.e) {
                ring.check_index(k)?;
            }
        }
        Ok(DeltaAxiom { ring: ring.clone(), u_arity, z_arity, rows })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn rows(&self) -> &[DeltaRow] {
        &self.rows
    }

    pub fn u_arity(&self) -> usize {
        self.u_arity
    }

    pub fn z_arity(&self) -> usize {
        self.z_arity
    }

    /// Reads `{"ring", "u_arity", "z_arity", "rows": [{"a","b","c","d","e"}]}`;
    /// coefficients are indices or element names.
    pub fn from_json(name: &str, text: &str) -> Result<DeltaAxiom> {
        let file: DeltaFile = serde_json::from_str(text).map_err(|e| Error::Parse {
            input: name.to_string(),
            position: e.column(),
            message: format!("line {}: {e}", e.line()),
        })?;
        let ring: Ring = Arc::new(build_ring(&file.ring)?);
        let coef = |c: &Coef| match c {
            Coef::Index(i) => ring.check_index(*i),
            Coef::Name(s) => ring.resolve(s),
        };
        let list = |v: &[Coef]| v.iter().map(coef).collect::<Result<Vec<_>>>();
        let rows = file
            .rows
            .iter()
            .map(|r| {
                Ok(DeltaRow {
                    a: coef(&r.a)?,
                    b: coef(&r.b)?,
                    c: list(&r.c)?,
                    d: list(&r.d)?,
                    e: list(&r.e)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        DeltaAxiom::new(&ring, file.u_arity, file.z_arity, rows)
    }

    pub fn from_file(path: &Path) -> Result<DeltaAxiom> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&path.display().to_string(), &text)
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Coef {
    Index(usize),
    Name(String),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DeltaFile {
    ring: String,
    #[serde(default)]
    u_arity: usize,
    #[serde(default)]
    z_arity: usize,
    rows: Vec<DeltaRowFile>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DeltaRowFile {
    a: Coef,
    b: Coef,
    #[serde(default)]
    c: Vec<Coef>,
    #[serde(default)]
    d: Vec<Coef>,
    #[serde(default)]
    e: Vec<Coef>,
}

/// Checks `a_j + b_j = 0`, `c_ij + d_ij = 0`, `e_ij = 0` and returns the
/// E-form with its encoding ideal.
pub fn reduce_delta(delta: &DeltaAxiom) -> Result<ReducedDelta> {
    let r = &delta.ring;
    for (j, row) in delta.rows.iter().enumerate() {
        let s = r.add(row.a, row.b);
        if s != r.zero() {
            return Err(Error::NotReducible { row: j, coefficient: "a+b".into(), value: s });
        }
        for (i, (&c, &d)) in row.c.iter().zip(&row.d).enumerate() {
            let s = r.add(c, d);
            if s != r.zero() {
                return Err(Error::NotReducible { row: j, coefficient: format!("c[{i}]+d[{i}]"), value: s });
            }
        }
        for (i, &e) in row.e.iter().enumerate() {
            if e != r.zero() {
                return Err(Error::NotReducible { row: j, coefficient: format!("e[{i}]"), value: e });
            }
        }
    }
    let gens: Vec<usize> = delta.rows.iter().map(|row| row.a).collect();
    Ok(ReducedDelta {
        rows: delta.rows.iter().map(|row| ERow { a: row.a, c: row.c.clone() }).collect(),
        ideal: left_ideal_closure(r, &gens)?,
    })
}

impl ReducedDelta {
    /// The Δ-axiom written with `x − y` and `u − v`: `b = −a`, `d = −c`,
    /// no `z` block.
    pub fn to_axiom(&self) -> Result<DeltaAxiom> {
        let ring = self.ideal.ring();
        let u_arity = self.rows.first().map_or(0, |r| r.c.len());
        let rows = self
            .rows
            .iter()
            .map(|row| DeltaRow {
                a: row.a,
                b: ring.neg(row.a),
                c: row.c.clone(),
                d: row.c.iter().map(|&c| ring.neg(c)).collect(),
                e: Vec::new(),
            })
            .collect();
        DeltaAxiom::new(ring, u_arity, 0, rows)
    }

    /// `E_j(0, 0̄)` for every row, which must be zero in any module.
    pub fn evaluate_at_zero(&self, module: &FiniteModule) -> Vec<usize> {
        self.rows
            .iter()
            .map(|row| {
                row.c
                    .iter()
                    .fold(module.act(row.a, module.zero()), |acc, &c| module.add(acc, module.act(c, module.zero())))
            })
            .collect()
    }
}

fn tuple_key(values: &[usize], m: usize) -> usize {
    values.iter().rev().fold(0, |acc, &v| acc * m + v)
}

/// Decides both conditions of the Δ-axiom in `module`.
///
/// (1) is an identity in independent variables, so it holds iff every
/// single-variable term vanishes. For (2) the `ū, z̄` contribution ranges
/// over the subgroup `V ⊆ Mⁿ` generated by the single-variable images, so
/// the premise holds for `(x, y)` iff `(a_j x + b_j y)_j ∈ V`.
pub fn delta_satisfied(module: &FiniteModule, delta: &DeltaAxiom) -> Result<bool> {
    if !same_ring(module.ring(), &delta.ring) {
        return Err(Error::RingMismatch);
    }
    let r = &delta.ring;
    let m = module.order();
    let zero = module.zero();
    let vanishes = |k: usize| module.elements().all(|x| module.act(k, x) == zero);
    for row in &delta.rows {
        if !vanishes(r.add(row.a, row.b)) {
            return Ok(false);
        }
        if row.c.iter().zip(&row.d).any(|(&c, &d)| !vanishes(r.add(c, d))) || row.e.iter().any(|&e| !vanishes(e)) {
            return Ok(false);
        }
    }
    let n = delta.rows.len();
    // one generator family per u_i and per z_i: t ↦ (k_j t)_j
    let mut columns: Vec<Vec<usize>> = Vec::new();
    for i in 0..delta.u_arity {
        columns.push(delta.rows.iter().map(|row| r.add(row.c[i], row.d[i])).collect());
    }
    for i in 0..delta.z_arity {
        columns.push(delta.rows.iter().map(|row| row.e[i]).collect());
    }
    let zero_tuple = vec![zero; n];
    let mut offsets: Vec<Vec<usize>> = vec![zero_tuple.clone()];
    let mut seen: HashSet<usize> = HashSet::from([tuple_key(&zero_tuple, m)]);
    for col in &columns {
        let images: Vec<Vec<usize>> = module
            .elements()
            .map(|t| col.iter().map(|&k| module.act(k, t)).collect())
            .collect();
        let current = offsets.clone();
        for v in &current {
            for img in &images {
                let w: Vec<usize> = v.iter().zip(img).map(|(&p, &q)| module.add(p, q)).collect();
                if seen.insert(tuple_key(&w, m)) {
                    offsets.push(w);
                }
            }
        }
    }
    let mut value = vec![zero; n];
    for x in module.elements() {
        for y in module.elements() {
            if x == y {
                continue;
            }
            for (j, row) in delta.rows.iter().enumerate() {
                value[j] = module.add(module.act(row.a, x), module.act(row.b, y));
            }
            if seen.contains(&tuple_key(&value, m)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `delta_satisfied` cross-checked against `q_A` for the encoding ideal;
/// disagreement is a fault.
pub fn delta_equiv_qa(module: &FiniteModule, delta: &DeltaAxiom) -> Result<bool> {
    let reduced = reduce_delta(delta)?;
    let direct = delta_satisfied(module, delta)?;
    let qa = satisfies_quasiidentity(module, &reduced.ideal)?;
    if direct != qa {
        return Err(Error::Fault(format!(
            "Δ-axiom evaluates to {direct} on {} but q_A for A = ({}) gives {qa}",
            module.name(),
            reduced.ideal.generator_labels()
        )));
    }
    Ok(direct)
}

/// Whether `A·m ⊆ S`; a positive answer is checked against the relative
/// closure of `S`.
pub fn delta_membership_witness(
    f: &TorsionNotion,
    module: &Module,
    s: &Submodule,
    m: usize,
    a: &LeftIdeal,
) -> Result<bool> {
    if !f.contains(a) {
        return Err(Error::NotMember);
    }
    if m >= module.order() {
        return Err(Error::IndexOutOfRange { index: m, order: module.order() });
    }
    let inside = module.ideal_times(a, m).is_subset(s.elements());
    if inside && !k_closure(f, module, s)?.contains(m) {
        return Err(Error::Fault(format!("A·m ⊆ S but m = {m} is outside the relative closure")));
    }
    Ok(inside)
}

/// A random reducible Δ-axiom: 1–3 rows, `u` arity 0–2, `z` arity 0–1,
/// with `b = −a`, `d = −c` and `e = 0`.
pub fn random_reducible<G: rand::Rng + ?Sized>(ring: &Ring, rng: &mut G) -> DeltaAxiom {
    let n = ring.order();
    let rows = rng.gen_range(1..=3);
    let u_arity = rng.gen_range(0..=2);
    let z_arity = rng.gen_range(0..=1);
    let rows = (0..rows)
        .map(|_| {
            let a = rng.gen_range(0..n);
            let c: Vec<usize> = (0..u_arity).map(|_| rng.gen_range(0..n)).collect();
            DeltaRow {
                a,
                b: ring.neg(a),
                d: c.iter().map(|&x| ring.neg(x)).collect(),
                c,
                e: vec![ring.zero(); z_arity],
            }
        })
        .collect();
    DeltaAxiom::new(ring, u_arity, z_arity, rows).expect("arities are consistent")
}

/// A Δ-shaped sentence with arbitrary coefficients, reducible or not.
pub fn random_unconstrained<G: rand::Rng + ?Sized>(ring: &Ring, rng: &mut G) -> DeltaAxiom {
    let n = ring.order();
    let rows = rng.gen_range(1..=2);
    let u_arity = rng.gen_range(0..=1);
    let z_arity = rng.gen_range(0..=1);
    let mut pick = |k: usize| (0..k).map(|_| rng.gen_range(0..n)).collect::<Vec<_>>();
    let rows = (0..rows)
        .map(|_| {
            let ab = pick(2);
            DeltaRow { a: ab[0], b: ab[1], c: pick(u_arity), d: pick(u_arity), e: pick(z_arity) }
        })
        .collect();
    DeltaAxiom::new(ring, u_arity, z_arity, rows).expect("arities are consistent")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideal::LeftIdeal;
    use crate::module::{quotient, regular, zero_module};
    use crate::ring::{cyclic, upper_triangular};
    use crate::torsion::check_torsion_axioms;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ut2() -> Ring {
        Arc::new(upper_triangular(2).unwrap())
    }

    fn ut2_axiom(r: &Ring) -> DeltaAxiom {
        // over GF(2), −e11 = e11
        let row = |a: usize| DeltaRow { a, b: r.neg(a), c: vec![], d: vec![], e: vec![] };
        DeltaAxiom::new(r, 0, 0, vec![row(4), row(2)]).unwrap()
    }

    /// Literal evaluation: every assignment of x, y, ū, z̄ (with v̄ = ū).
    fn brute_force(module: &FiniteModule, d: &DeltaAxiom) -> bool {
        let m = module.order();
        let k = d.u_arity() + d.z_arity();
        let eval = |x: usize, y: usize, vars: &[usize], row: &DeltaRow| {
            let mut acc = module.add(module.act(row.a, x), module.act(row.b, y));
            for i in 0..d.u_arity() {
                acc = module.add(acc, module.act(row.c[i], vars[i]));
                acc = module.add(acc, module.act(row.d[i], vars[i]));
            }
            for i in 0..d.z_arity() {
                acc = module.add(acc, module.act(row.e[i], vars[d.u_arity() + i]));
            }
            acc
        };
        let total = m.pow(k as u32);
        for code in 0..total {
            let vars: Vec<usize> = (0..k).map(|i| code / m.pow(i as u32) % m).collect();
            for x in 0..m {
                if d.rows().iter().any(|row| eval(x, x, &vars, row) != module.zero()) {
                    return false;
                }
                for y in 0..m {
                    if x != y && d.rows().iter().all(|row| eval(x, y, &vars, row) == module.zero()) {
                        return false;
                    }
                }
            }
        }
        true
    }

    #[test]
    fn reduction_examples() {
        let r = ut2();
        let red = reduce_delta(&ut2_axiom(&r)).unwrap();
        assert_eq!(red.ideal.elements().to_vec(), vec![0, 2, 4, 6]);
        assert_eq!(red.ideal.generators(), &[4, 2]);

        let z4: Ring = Arc::new(cyclic(4).unwrap());
        let trivial = DeltaAxiom::new(&z4, 0, 0, vec![DeltaRow { a: 1, b: 3, c: vec![], d: vec![], e: vec![] }]).unwrap();
        assert!(reduce_delta(&trivial).unwrap().ideal.is_whole());

        let z6: Ring = Arc::new(cyclic(6).unwrap());
        let d = DeltaAxiom::new(&z6, 1, 0, vec![DeltaRow { a: 2, b: 4, c: vec![3], d: vec![3], e: vec![] }]).unwrap();
        let red = reduce_delta(&d).unwrap();
        assert_eq!(red.rows, vec![ERow { a: 2, c: vec![3] }]);
        assert_eq!(red.ideal.elements().to_vec(), vec![0, 2, 4]);
    }

    #[test]
    fn irreducible_rows_are_named() {
        let z6: Ring = Arc::new(cyclic(6).unwrap());
        let d = DeltaAxiom::new(&z6, 1, 1, vec![DeltaRow { a: 2, b: 4, c: vec![3], d: vec![3], e: vec![1] }]).unwrap();
        match reduce_delta(&d) {
            Err(Error::NotReducible { row: 0, coefficient, value: 1 }) => assert_eq!(coefficient, "e[0]"),
            other => panic!("{other:?}"),
        }
        let d = DeltaAxiom::new(&z6, 0, 0, vec![DeltaRow { a: 2, b: 2, c: vec![], d: vec![], e: vec![] }]).unwrap();
        assert!(matches!(reduce_delta(&d), Err(Error::NotReducible { .. })));
    }

    #[test]
    fn satisfaction_examples() {
        let r = ut2();
        let d = ut2_axiom(&r);
        let reg = regular(&r);
        assert!(delta_equiv_qa(&reg, &d).unwrap());
        let a = reduce_delta(&d).unwrap().ideal;
        let s = Submodule::from_elements(&reg, a.elements().clone()).unwrap();
        let q = quotient(&reg, &s).unwrap().module;
        assert!(!delta_equiv_qa(&q, &d).unwrap());
        assert!(delta_equiv_qa(&zero_module(&r), &d).unwrap());
        for m in [&reg, &q] {
            assert_eq!(delta_satisfied(m, &d).unwrap(), brute_force(m, &d));
        }
    }

    #[test]
    fn fast_evaluation_matches_brute_force_on_random_sentences() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [2usize, 3, 4] {
            let ring: Ring = Arc::new(cyclic(n).unwrap());
            let modules: Vec<Module> = crate::corpus::module_corpus(&ring, 1).unwrap();
            for _ in 0..40 {
                let d = random_unconstrained(&ring, &mut rng);
                for m in &modules {
                    assert_eq!(delta_satisfied(m, &d).unwrap(), brute_force(m, &d), "{d:?} on {}", m.name());
                }
            }
        }
    }

    #[test]
    fn reduction_is_stable() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let r = ut2();
        for _ in 0..50 {
            let d = random_reducible(&r, &mut rng);
            let red = reduce_delta(&d).unwrap();
            let again = reduce_delta(&red.to_axiom().unwrap()).unwrap();
            assert_eq!(again.ideal, red.ideal);
            let m = regular(&r);
            assert!(red.evaluate_at_zero(&m).iter().all(|&v| v == m.zero()));
        }
    }

    #[test]
    fn membership_witness_examples() {
        let r = ut2();
        let a = left_ideal_closure(&r, &[4, 2]).unwrap();
        let f = check_torsion_axioms(&r, &[a.clone(), LeftIdeal::whole(&r)]).unwrap().valid().unwrap();
        let reg = regular(&r);
        let s = Submodule::from_elements(&reg, a.elements().clone()).unwrap();
        assert!(delta_membership_witness(&f, &reg, &s, r.one(), &a).unwrap());
        assert!(!delta_membership_witness(&f, &reg, &Submodule::zero(&reg), 1, &a).unwrap());
        let t = crate::torsion::TorsionNotion::trivial(&r);
        assert!(delta_membership_witness(&t, &reg, &s, 2, &LeftIdeal::whole(&r)).unwrap());
        let e11 = left_ideal_closure(&r, &[4]).unwrap();
        assert!(matches!(delta_membership_witness(&f, &reg, &s, 1, &e11), Err(Error::NotMember)));
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"ring": "UT2(2)", "rows": [{"a": "e11", "b": "e11"}, {"a": "e12", "b": 2}]}"#;
        let d = DeltaAxiom::from_json("inline", text).unwrap();
        assert_eq!(reduce_delta(&d).unwrap().ideal.size(), 4);
        assert!(DeltaAxiom::from_json("bad", r#"{"ring": "UT2(2)", "rows": [{"a": "e11"}]}"#).is_err());
    }
}
