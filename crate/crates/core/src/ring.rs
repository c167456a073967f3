//! Finite unital rings given by addition and multiplication tables.

use std::fmt;
use std::path::Path;
use std::sync::Arc;

use serde::Deserialize;

use crate::error::{Error, Result};

/// Shared handle to a validated ring. Ideals and modules keep one of these.
pub type Ring = Arc<FiniteRing>;

/// A finite unital ring on the element indices `0..order`.
///
/// Construction always validates the tables exhaustively, so every value of
/// this type is a ring.
#[derive(Clone)]
pub struct FiniteRing {
    name: String,
    order: usize,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    zero: usize,
    one: usize,
    labels: Vec<String>,
    aliases: Vec<(String, usize)>,
    preferred: Vec<usize>,
}

impl PartialEq for FiniteRing {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order
            && self.zero == other.zero
            && self.one == other.one
            && self.add == other.add
            && self.mul == other.mul
    }
}

impl Eq for FiniteRing {}

impl fmt::Debug for FiniteRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteRing({}, order {})", self.name, self.order)
    }
}

impl FiniteRing {
    /// Builds a ring from row-major tables, checking every ring axiom.
    ///
    /// On failure the error names the axiom and the least witness tuple.
    pub fn from_tables(
        name: impl Into<String>,
        order: usize,
        add: Vec<usize>,
        mul: Vec<usize>,
        zero: usize,
        one: usize,
    ) -> Result<Self> {
        if order == 0 {
            return Err(Error::Table("ring order must be positive".into()));
        }
        if order > u32::MAX as usize {
            return Err(Error::Table("ring order too large".into()));
        }
        for (what, table) in [("add", &add), ("mul", &mul)] {
            if table.len() != order * order {
                return Err(Error::Table(format!(
                    "{what} table has {} entries, expected {}",
                    table.len(),
                    order * order
                )));
            }
            if let Some(pos) = table.iter().position(|&v| v >= order) {
                return Err(Error::Table(format!(
                    "{what}[{}][{}] = {} is not an element index",
                    pos / order,
                    pos % order,
                    table[pos]
                )));
            }
        }
        for v in [zero, one] {
            if v >= order {
                return Err(Error::IndexOutOfRange { index: v, order });
            }
        }
        let add: Vec<u32> = add.into_iter().map(|v| v as u32).collect();
        let mul: Vec<u32> = mul.into_iter().map(|v| v as u32).collect();
        let neg = validate_ring(order, &add, &mul, zero, one)?;
        Ok(FiniteRing {
            name: name.into(),
            order,
            add,
            mul,
            neg,
            zero,
            one,
            labels: (0..order).map(|i| i.to_string()).collect(),
            aliases: vec![("0".into(), zero), ("1".into(), one)],
            preferred: default_preference(order, one),
        })
    }

    /// Reads an explicit-table ring file (`{"order", "add", "mul", "zero", "one"}`).
    pub fn from_table_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_table_json(&path.display().to_string(), &text)
    }

    pub fn from_table_json(name: &str, text: &str) -> Result<Self> {
        let file: RingTableFile = serde_json::from_str(text).map_err(|e| Error::Parse {
            input: name.to_string(),
            position: e.column(),
            message: format!("line {}: {e}", e.line()),
        })?;
        let n = file.order;
        let flatten = |what: &str, rows: Vec<Vec<usize>>| -> Result<Vec<usize>> {
            if rows.len() != n {
                return Err(Error::Table(format!("{what} has {} rows, expected {n}", rows.len())));
            }
            let mut flat = Vec::with_capacity(n * n);
            for (i, row) in rows.into_iter().enumerate() {
                if row.len() != n {
                    return Err(Error::Table(format!(
                        "{what}[{i}] has {} entries, expected {n}",
                        row.len()
                    )));
                }
                flat.extend(row);
            }
            Ok(flat)
        };
        let add = flatten("add", file.add)?;
        let mul = flatten("mul", file.mul)?;
        Self::from_tables(format!("table:{name}"), n, add, mul, file.zero, file.one)
    }

    pub(crate) fn with_labels(mut self, labels: Vec<String>) -> Self {
        debug_assert_eq!(labels.len(), self.order);
        self.labels = labels;
        self
    }

    pub(crate) fn with_aliases(mut self, extra: Vec<(String, usize)>) -> Self {
        self.aliases.extend(extra);
        self
    }

    pub(crate) fn with_preference(mut self, head: &[usize]) -> Self {
        let mut seen = vec![false; self.order];
        let mut order = Vec::with_capacity(self.order);
        for x in std::iter::once(self.one).chain(head.iter().copied()).chain(0..self.order) {
            if !seen[x] {
                seen[x] = true;
                order.push(x);
            }
        }
        self.preferred = order;
        self
    }

    pub(crate) fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
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

    pub fn one(&self) -> usize {
        self.one
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.order + b] as usize
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b] as usize
    }

    #[inline]
    pub fn neg(&self, a: usize) -> usize {
        self.neg[a] as usize
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    pub fn is_commutative(&self) -> bool {
        self.elements()
            .all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn is_idempotent(&self, e: usize) -> bool {
        self.mul(e, e) == e
    }

    pub fn check_index(&self, i: usize) -> Result<usize> {
        if i < self.order {
            Ok(i)
        } else {
            Err(Error::IndexOutOfRange {
                index: i,
                order: self.order,
            })
        }
    }

    /// Display label of an element (`e11+e12`, `3`, `(1,0)`, ...).
    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn aliases(&self) -> &[(String, usize)] {
        &self.aliases
    }

    /// Greedy order used when choosing canonical generators of ideals.
    pub(crate) fn preferred(&self) -> &[usize] {
        &self.preferred
    }

    /// Resolves an element written as a builtin name, a label, an integer
    /// index, or a `+`-separated sum of those (a leading `-` negates).
    pub fn resolve(&self, text: &str) -> Result<usize> {
        let text = text.trim();
        if text.is_empty() {
            return Err(Error::UnknownElement(text.to_string()));
        }
        let parts = split_top_level(text, '+');
        if parts.len() > 1 {
            let mut acc = self.zero;
            for p in parts {
                acc = self.add(acc, self.resolve(p)?);
            }
            return Ok(acc);
        }
        if let Some(rest) = text.strip_prefix('-') {
            return Ok(self.neg(self.resolve(rest)?));
        }
        if let Some((_, i)) = self.aliases.iter().find(|(name, _)| name == text) {
            return Ok(*i);
        }
        if let Some(i) = self.labels.iter().position(|l| l == text) {
            return Ok(i);
        }
        match text.parse::<usize>() {
            Ok(i) => self.check_index(i),
            Err(_) => Err(Error::UnknownElement(text.to_string())),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RingTableFile {
    order: usize,
    add: Vec<Vec<usize>>,
    mul: Vec<Vec<usize>>,
    zero: usize,
    one: usize,
}

fn default_preference(order: usize, one: usize) -> Vec<usize> {
    std::iter::once(one)
        .chain((0..order).filter(|&i| i != one))
        .collect()
}

/// Splits at `sep` outside parentheses.
pub(crate) fn split_top_level(text: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in text.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&text[start..i]);
                start = i + ch.len_utf8();
            }
            _ => {}
        }
    }
    out.push(&text[start..]);
    out
}

fn validate_ring(order: usize, add: &[u32], mul: &[u32], zero: usize, one: usize) -> Result<Vec<u32>> {
    let n = order;
    let a = |x: usize, y: usize| add[x * n + y] as usize;
    let m = |x: usize, y: usize| mul[x * n + y] as usize;
    let fail = |msg: String| Err(Error::Table(msg));

    for x in 0..n {
        if a(zero, x) != x || a(x, zero) != x {
            return fail(format!("zero {zero} is not an additive identity at {x}"));
        }
    }
    for x in 0..n {
        for y in 0..n {
            if a(x, y) != a(y, x) {
                return fail(format!("addition is not commutative at ({x},{y})"));
            }
        }
    }
    for x in 0..n {
        for y in 0..n {
            let xy = a(x, y);
            for z in 0..n {
                if a(xy, z) != a(x, a(y, z)) {
                    return fail(format!("addition is not associative at ({x},{y},{z})"));
                }
            }
        }
    }
    let mut neg = vec![0u32; n];
    for x in 0..n {
        match (0..n).find(|&y| a(x, y) == zero) {
            Some(y) => neg[x] = y as u32,
            None => return fail(format!("element {x} has no additive inverse")),
        }
    }
    if n > 1 && zero == one {
        return fail("zero equals one in a ring with more than one element".into());
    }
    for x in 0..n {
        if m(one, x) != x || m(x, one) != x {
            return fail(format!("one {one} is not a two-sided identity at {x}"));
        }
    }
    for x in 0..n {
        for y in 0..n {
            let xy = m(x, y);
            for z in 0..n {
                if m(xy, z) != m(x, m(y, z)) {
                    return fail(format!("multiplication is not associative at ({x},{y},{z})"));
                }
            }
        }
    }
    for x in 0..n {
        for y in 0..n {
            let xy = m(x, y);
            for z in 0..n {
                if m(x, a(y, z)) != a(xy, m(x, z)) {
                    return fail(format!("left distributivity fails at ({x},{y},{z})"));
                }
                if m(a(x, y), z) != a(m(x, z), m(y, z)) {
                    return fail(format!("right distributivity fails at ({x},{y},{z})"));
                }
            }
        }
    }
    Ok(neg)
}

// ---------------------------------------------------------------------------
// Builtin constructors

/// Integers modulo `n`.
pub fn cyclic(n: usize) -> Result<FiniteRing> {
    if n == 0 {
        return Err(Error::Precondition("Z(n) needs n ≥ 1".into()));
    }
    let add = (0..n * n).map(|k| (k / n + k % n) % n).collect();
    let mul = (0..n * n).map(|k| (k / n) * (k % n) % n).collect();
    FiniteRing::from_tables(format!("Z({n})"), n, add, mul, 0, 1 % n)
}

pub fn is_prime(p: usize) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// Prime field GF(p).
pub fn prime_field(p: usize) -> Result<FiniteRing> {
    if !is_prime(p) {
        return Err(Error::Precondition(format!("GF({p}): {p} is not prime")));
    }
    Ok(cyclic(p)?.with_name(format!("GF({p})")))
}

/// Upper-triangular 2×2 matrices over GF(p), `[[a,b],[0,c]] ↦ a·p² + b·p + c`.
pub fn upper_triangular(p: usize) -> Result<FiniteRing> {
    if !is_prime(p) {
        return Err(Error::Precondition(format!("UT2({p}): {p} is not prime")));
    }
    let n = p * p * p;
    let decode = |i: usize| [i / (p * p), (i / p) % p, i % p];
    let encode = |[a, b, c]: [usize; 3]| a * p * p + b * p + c;
    let mut add = Vec::with_capacity(n * n);
    let mut mul = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            let [a1, b1, c1] = decode(x);
            let [a2, b2, c2] = decode(y);
            add.push(encode([(a1 + a2) % p, (b1 + b2) % p, (c1 + c2) % p]));
            mul.push(encode([(a1 * a2) % p, (a1 * b2 + b1 * c2) % p, (c1 * c2) % p]));
        }
    }
    let one = encode([1, 0, 1]);
    let units = [("e11", p * p), ("e12", p), ("e22", 1)];
    let labels = (0..n)
        .map(|i| matrix_label(&decode(i), &["e11", "e12", "e22"], i == one))
        .collect();
    Ok(
        FiniteRing::from_tables(format!("UT2({p})"), n, add, mul, 0, one)?
            .with_labels(labels)
            .with_aliases(units.iter().map(|(s, i)| (s.to_string(), *i)).collect())
            .with_preference(&units.map(|(_, i)| i)),
    )
}

/// Full 2×2 matrix ring over GF(p), `[[a,b],[c,d]] ↦ a·p³ + b·p² + c·p + d`.
pub fn full_matrix(p: usize) -> Result<FiniteRing> {
    if !is_prime(p) {
        return Err(Error::Precondition(format!("M2({p}): {p} is not prime")));
    }
    let n = p.pow(4);
    let decode = |i: usize| [i / p.pow(3), (i / (p * p)) % p, (i / p) % p, i % p];
    let encode = |[a, b, c, d]: [usize; 4]| a * p.pow(3) + b * p * p + c * p + d;
    let mut add = Vec::with_capacity(n * n);
    let mut mul = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            let [a1, b1, c1, d1] = decode(x);
            let [a2, b2, c2, d2] = decode(y);
            add.push(encode([(a1 + a2) % p, (b1 + b2) % p, (c1 + c2) % p, (d1 + d2) % p]));
            mul.push(encode([
                (a1 * a2 + b1 * c2) % p,
                (a1 * b2 + b1 * d2) % p,
                (c1 * a2 + d1 * c2) % p,
                (c1 * b2 + d1 * d2) % p,
            ]));
        }
    }
    let one = encode([1, 0, 0, 1]);
    let units = [("e11", p.pow(3)), ("e12", p * p), ("e21", p), ("e22", 1)];
    let labels = (0..n)
        .map(|i| matrix_label(&decode(i), &["e11", "e12", "e21", "e22"], i == one))
        .collect();
    Ok(
        FiniteRing::from_tables(format!("M2({p})"), n, add, mul, 0, one)?
            .with_labels(labels)
            .with_aliases(units.iter().map(|(s, i)| (s.to_string(), *i)).collect())
            .with_preference(&units.map(|(_, i)| i)),
    )
}

fn matrix_label(coeffs: &[usize], units: &[&str], is_one: bool) -> String {
    if is_one {
        return "1".into();
    }
    let terms: Vec<String> = coeffs
        .iter()
        .zip(units)
        .filter(|(c, _)| **c != 0)
        .map(|(c, u)| if *c == 1 { u.to_string() } else { format!("{c}{u}") })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join("+")
    }
}

/// Direct product `R₁ × R₂`, with `(x, y) ↦ x·|R₂| + y`.
pub fn product(left: &FiniteRing, right: &FiniteRing) -> Result<FiniteRing> {
    let (n1, n2) = (left.order(), right.order());
    let n = n1 * n2;
    let split = |i: usize| (i / n2, i % n2);
    let mut add = Vec::with_capacity(n * n);
    let mut mul = Vec::with_capacity(n * n);
    for x in 0..n {
        let (x1, x2) = split(x);
        for y in 0..n {
            let (y1, y2) = split(y);
            add.push(left.add(x1, y1) * n2 + right.add(x2, y2));
            mul.push(left.mul(x1, y1) * n2 + right.mul(x2, y2));
        }
    }
    let zero = left.zero() * n2 + right.zero();
    let one = left.one() * n2 + right.one();
    let labels = (0..n)
        .map(|i| {
            let (a, b) = split(i);
            format!("({},{})", left.label(a), right.label(b))
        })
        .collect();
    let mut preference = Vec::new();
    for &a in left.preferred() {
        for &b in right.preferred() {
            preference.push(a * n2 + b);
        }
    }
    Ok(FiniteRing::from_tables(
        format!("prod({},{})", left.name(), right.name()),
        n,
        add,
        mul,
        zero,
        one,
    )?
    .with_labels(labels)
    .with_preference(&preference))
}

/// Quotient tables: builds `R/I` given the coset label of every element of `R`.
/// Coset `k` is represented by the least element mapping to it.
pub(crate) fn quotient_tables(
    ring: &FiniteRing,
    projection: &[usize],
    reps: &[usize],
    name: String,
) -> Result<FiniteRing> {
    let q = reps.len();
    let mut add = Vec::with_capacity(q * q);
    let mut mul = Vec::with_capacity(q * q);
    for &x in reps {
        for &y in reps {
            add.push(projection[ring.add(x, y)]);
            mul.push(projection[ring.mul(x, y)]);
        }
    }
    let zero = projection[ring.zero()];
    let one = projection[ring.one()];
    let labels = (0..q)
        .map(|k| {
            if k == zero {
                "0".to_string()
            } else if k == one {
                "1".to_string()
            } else {
                format!("[{}]", ring.label(reps[k]))
            }
        })
        .collect();
    let mut aliases: Vec<(String, usize)> = ring
        .aliases()
        .iter()
        .filter(|(s, _)| s != "0" && s != "1")
        .map(|(s, i)| (s.clone(), projection[*i]))
        .collect();
    aliases.extend((0..ring.order()).map(|i| (ring.label(i).to_string(), projection[i])));
    let preference: Vec<usize> = ring.preferred().iter().map(|&i| projection[i]).collect();
    Ok(FiniteRing::from_tables(name, q, add, mul, zero, one)?
        .with_labels(labels)
        .with_aliases(aliases)
        .with_preference(&preference))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn matmul2(x: [[usize; 2]; 2], y: [[usize; 2]; 2], p: usize) -> [[usize; 2]; 2] {
        let mut out = [[0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = (0..2).map(|k| x[i][k] * y[k][j]).sum::<usize>() % p;
            }
        }
        out
    }

    #[test]
    fn cyclic_four_is_arithmetic_mod_four() {
        let r = cyclic(4).unwrap();
        assert_eq!(r.order(), 4);
        for a in 0..4 {
            for b in 0..4 {
                assert_eq!(r.add(a, b), (a + b) % 4);
                assert_eq!(r.mul(a, b), (a * b) % 4);
            }
        }
        assert!(r.is_commutative());
    }

    #[test]
    fn ut2_encoding_matches_matrix_arithmetic() {
        let r = upper_triangular(2).unwrap();
        assert_eq!(r.order(), 8);
        let e11 = r.resolve("e11").unwrap();
        let e12 = r.resolve("e12").unwrap();
        let e22 = r.resolve("e22").unwrap();
        assert_eq!((e11, e12, e22, r.one()), (4, 2, 1, 5));
        assert_eq!(r.mul(e11, e12), e12);
        assert_eq!(r.mul(e12, e11), 0);
        assert!(!r.is_commutative());
        let decode = |i: usize| [[i / 4, (i / 2) % 2], [0, i % 2]];
        for x in 0..8 {
            for y in 0..8 {
                let m = matmul2(decode(x), decode(y), 2);
                assert_eq!(decode(r.mul(x, y)), m, "{x}·{y}");
            }
        }
    }

    #[test]
    fn m2_encoding_matches_matrix_arithmetic() {
        let r = full_matrix(2).unwrap();
        let decode = |i: usize| [[i / 8, (i / 4) % 2], [(i / 2) % 2, i % 2]];
        for x in 0..16 {
            for y in 0..16 {
                assert_eq!(decode(r.mul(x, y)), matmul2(decode(x), decode(y), 2));
            }
        }
        assert_eq!(r.one(), 9);
    }

    #[test]
    fn non_associative_table_is_rejected_with_witness() {
        // F2-algebra on basis {1, u, v} with u·v = u and all other products of
        // u, v zero: bilinear and unital, but (u·v)·v = u while u·(v·v) = 0.
        let basis = |i: usize, j: usize| -> usize {
            match (i, j) {
                (0, k) | (k, 0) => 1 << k,
                (1, 2) => 1 << 1,
                _ => 0,
            }
        };
        let mut add = Vec::new();
        let mut mul = Vec::new();
        for x in 0..8usize {
            for y in 0..8usize {
                add.push(x ^ y);
                let mut p = 0;
                for i in (0..3).filter(|i| x >> i & 1 == 1) {
                    for j in (0..3).filter(|j| y >> j & 1 == 1) {
                        p ^= basis(i, j);
                    }
                }
                mul.push(p);
            }
        }
        let err = FiniteRing::from_tables("bad", 8, add, mul, 0, 1).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("not associative at ("), "{msg}");
    }

    #[test]
    fn explicit_table_file_round_trip() {
        let json = r#"{"order": 2, "add": [[0,1],[1,0]], "mul": [[0,0],[0,1]], "zero": 0, "one": 1}"#;
        let r = FiniteRing::from_table_json("gf2", json).unwrap();
        assert_eq!(r, cyclic(2).unwrap());
        let bad = r#"{"order": 2, "add": [[0,1],[1,0]], "mul": [[0,0],[0,1]], "zero": 0"#;
        assert!(matches!(FiniteRing::from_table_json("x", bad), Err(Error::Parse { .. })));
        let short = r#"{"order": 2, "add": [[0,1]], "mul": [[0,0],[0,1]], "zero": 0, "one": 1}"#;
        assert!(matches!(FiniteRing::from_table_json("x", short), Err(Error::Table(_))));
    }

    #[test]
    fn degenerate_ring_is_allowed() {
        let r = cyclic(1).unwrap();
        assert_eq!(r.zero(), r.one());
    }

    #[test]
    fn resolve_names_sums_and_indices() {
        let r = upper_triangular(2).unwrap();
        assert_eq!(r.resolve("e11+e12").unwrap(), 6);
        assert_eq!(r.resolve("1").unwrap(), 5);
        assert_eq!(r.resolve("3").unwrap(), 3);
        assert_eq!(r.label(6), "e11+e12");
        assert!(r.resolve("e99").is_err());
        let p = product(&cyclic(2).unwrap(), &cyclic(3).unwrap()).unwrap();
        assert_eq!(p.resolve("(1,2)").unwrap(), 5);
    }

    #[test]
    fn gf_rejects_composite() {
        assert!(prime_field(4).is_err());
        assert!(upper_triangular(4).is_err());
    }
}
