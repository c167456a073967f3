//! Ring-spec and module-spec mini-languages, plus the builtin ring list.
//!
//! Rings: `Z(n)`, `GF(p)`, `UT2(p)`, `M2(p)`, `prod(S1,S2)`,
//! `quot(S,g1,g2,...)` (two-sided closure of the listed generators) and
//! `table:PATH`.
//!
//! Modules over a ring: `R`, `R^k`, `zero`, `sum(M1,M2)`,
//! `quot(M;x1,x2,...)` and `table:PATH`.

use std::path::Path;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ideal::{left_ideal_closure, quotient_ring, two_sided_closure, LeftIdeal};
use crate::module::{direct_sum, power, quotient, regular, submodule_closure, zero_module, FiniteModule, Module};
use crate::ring::{self, split_top_level, FiniteRing, Ring};

/// Every builtin ring of order at most 16, smallest first within each family.
pub const BUILTIN_RINGS: &[&str] = &[
    "Z(1)", "Z(2)", "Z(3)", "Z(4)", "Z(5)", "Z(6)", "Z(7)", "Z(8)", "Z(9)", "Z(10)", "Z(11)",
    "Z(12)", "Z(13)", "Z(14)", "Z(15)", "Z(16)",
    "GF(2)", "GF(3)", "GF(5)", "GF(7)", "GF(11)", "GF(13)",
    "UT2(2)", "M2(2)",
    "prod(Z(2),Z(2))", "prod(Z(2),Z(3))", "prod(Z(2),Z(4))", "prod(Z(2),Z(5))",
    "prod(Z(2),Z(6))", "prod(Z(2),Z(8))", "prod(Z(3),Z(3))", "prod(Z(3),Z(4))",
    "prod(Z(3),Z(5))", "prod(Z(4),Z(4))",
    "prod(Z(2),prod(Z(2),Z(2)))", "prod(Z(2),prod(Z(2),Z(4)))",
    "prod(prod(Z(2),Z(2)),prod(Z(2),Z(2)))",
    "prod(Z(2),UT2(2))", "quot(UT2(2),e12)",
];

/// Builds and names every builtin ring.
pub fn builtin_rings() -> Vec<Ring> {
    BUILTIN_RINGS
        .iter()
        .map(|s| Arc::new(build_ring(s).expect("builtin specs are valid")))
        .collect()
}

fn parse_error(input: &str, position: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        input: input.to_string(),
        position,
        message: message.into(),
    }
}

/// Splits `head(args)` into `head` and the raw argument text.
fn call<'a>(full: &str, text: &'a str, offset: usize) -> Result<(&'a str, &'a str, usize)> {
    let open = text
        .find('(')
        .ok_or_else(|| parse_error(full, offset, "expected `(`"))?;
    if !text.ends_with(')') {
        return Err(parse_error(full, offset + text.len(), "expected `)` at end"));
    }
    let inner = &text[open + 1..text.len() - 1];
    let mut depth = 0i32;
    for (i, ch) in inner.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return Err(parse_error(full, offset + open + 1 + i, "unbalanced `)`"));
                }
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(parse_error(full, offset + text.len(), "unbalanced `(`"));
    }
    Ok((&text[..open], inner, offset + open + 1))
}

fn number(full: &str, text: &str, offset: usize) -> Result<usize> {
    text.parse()
        .map_err(|_| parse_error(full, offset, format!("expected a number, found `{text}`")))
}

/// Parses a ring spec and returns the validated ring, named by its spec.
pub fn build_ring(spec: &str) -> Result<FiniteRing> {
    let compact: String = spec.chars().filter(|c| !c.is_whitespace()).collect();
    if let Some(path) = spec.trim().strip_prefix("table:") {
        return read_ring_table(path);
    }
    ring_expr(&compact, &compact, 0)
}

fn read_ring_table(path: &str) -> Result<FiniteRing> {
    let text = std::fs::read_to_string(Path::new(path))?;
    Ok(FiniteRing::from_table_json(path, &text)?.with_name(format!("table:{path}")))
}

fn ring_expr(full: &str, text: &str, offset: usize) -> Result<FiniteRing> {
    if text.is_empty() {
        return Err(parse_error(full, offset, "empty ring spec"));
    }
    if let Some(path) = text.strip_prefix("table:") {
        return read_ring_table(path);
    }
    let (head, inner, at) = call(full, text, offset)?;
    let ring = match head {
        "Z" => ring::cyclic(number(full, inner, at)?)?,
        "GF" => ring::prime_field(number(full, inner, at)?)?,
        "UT2" => ring::upper_triangular(number(full, inner, at)?)?,
        "M2" => ring::full_matrix(number(full, inner, at)?)?,
        "prod" => {
            let args = split_top_level(inner, ',');
            if args.len() != 2 {
                return Err(parse_error(full, at, "prod takes exactly two rings"));
            }
            let left = ring_expr(full, args[0], at)?;
            let right = ring_expr(full, args[1], at + args[0].len() + 1)?;
            ring::product(&left, &right)?
        }
        "quot" => {
            let args = split_top_level(inner, ',');
            if args.len() < 2 {
                return Err(parse_error(full, at, "quot takes a ring and at least one generator"));
            }
            let base = Arc::new(ring_expr(full, args[0], at)?);
            let gens = args[1..]
                .iter()
                .map(|g| base.resolve(g))
                .collect::<Result<Vec<_>>>()?;
            let ideal = two_sided_closure(&base, &gens)?;
            let q = quotient_ring(&base, &ideal)?;
            (**q.ring()).clone()
        }
        other => {
            return Err(parse_error(full, offset, format!("unknown ring constructor `{other}`")));
        }
    };
    Ok(ring.with_name(text))
}

/// Comma-separated element list (`e11,e12`, `2`, `(1,0)`).
pub fn parse_elements(ring: &FiniteRing, text: &str) -> Result<Vec<usize>> {
    let text = text.trim();
    if text.is_empty() {
        return Err(Error::EmptyGenerators);
    }
    split_top_level(text, ',').into_iter().map(|t| ring.resolve(t)).collect()
}

/// Semicolon-separated generator lists: `e11,e12;1` is `{(e11,e12), (1)}`.
pub fn parse_ideal_family(ring: &Ring, text: &str) -> Result<Vec<LeftIdeal>> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(';')
        .map(|part| left_ideal_closure(ring, &parse_elements(ring, part)?))
        .collect()
}

/// Parses a module spec over `ring`.
pub fn build_module(ring: &Ring, spec: &str) -> Result<Module> {
    let trimmed = spec.trim();
    if let Some(path) = trimmed.strip_prefix("table:") {
        let text = std::fs::read_to_string(Path::new(path))?;
        let module = FiniteModule::from_table_json(path, &text)?;
        if module.ring() != ring {
            return Err(Error::RingMismatch);
        }
        return Ok(Arc::new(module));
    }
    let compact: String = trimmed.chars().filter(|c| !c.is_whitespace()).collect();
    module_expr(ring, &compact, &compact, 0)
}

fn module_expr(ring: &Ring, full: &str, text: &str, offset: usize) -> Result<Module> {
    match text {
        "" => return Err(parse_error(full, offset, "empty module spec")),
        "R" => return Ok(regular(ring)),
        "zero" | "0" => return Ok(zero_module(ring)),
        _ => {}
    }
    if let Some(k) = text.strip_prefix("R^") {
        let k = number(full, k, offset + 2)?;
        if k == 0 {
            return Ok(zero_module(ring));
        }
        return power(ring, k);
    }
    let (head, inner, at) = call(full, text, offset)?;
    match head {
        "sum" => {
            let args = split_top_level(inner, ',');
            if args.len() != 2 {
                return Err(parse_error(full, at, "sum takes exactly two modules"));
            }
            let left = module_expr(ring, full, args[0], at)?;
            let right = module_expr(ring, full, args[1], at + args[0].len() + 1)?;
            direct_sum(&left, &right)
        }
        "quot" => {
            let args = split_top_level(inner, ';');
            if args.len() != 2 {
                return Err(parse_error(full, at, "quot takes `module;elements`"));
            }
            let base = module_expr(ring, full, args[0], at)?;
            let gens = parse_module_elements(&base, args[1])?;
            let sub = submodule_closure(&base, &gens)?;
            Ok(quotient(&base, &sub)?.module)
        }
        other => Err(parse_error(full, offset, format!("unknown module constructor `{other}`"))),
    }
}

/// Comma-separated module elements, resolved by label or index.
pub fn parse_module_elements(module: &FiniteModule, text: &str) -> Result<Vec<usize>> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    split_top_level(text, ',').into_iter().map(|t| module.resolve(t)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_parse_and_stay_small() {
        for (spec, ring) in BUILTIN_RINGS.iter().zip(builtin_rings()) {
            assert!(ring.order() <= 16, "{spec}");
            assert_eq!(ring.name(), *spec);
        }
    }

    #[test]
    fn quotient_spec() {
        let r = build_ring("quot(UT2(2), e12)").unwrap();
        assert_eq!(r.order(), 4);
        assert!(r.is_commutative());
        // UT2(2)/(e12) ≅ GF(2) × GF(2)
        let idempotents = r.elements().filter(|&e| r.is_idempotent(e)).count();
        assert_eq!(idempotents, 4);
    }

    #[test]
    fn positioned_errors() {
        for bad in ["Z(4", "Q(3)", "prod(Z(2))", "Z(x)", "", "GF(4)"] {
            assert!(build_ring(bad).is_err(), "{bad}");
        }
        match build_ring("prod(Z(2),W(3))") {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 10),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn filters_and_modules() {
        let r = Arc::new(build_ring("UT2(2)").unwrap());
        let fam = parse_ideal_family(&r, "e11,e12;1").unwrap();
        assert_eq!(fam.len(), 2);
        assert_eq!(fam[0].size(), 4);
        assert!(fam[1].is_whole());
        let m = build_module(&r, "quot(R;e11,e12)").unwrap();
        assert_eq!(m.order(), 2);
        let m2 = build_module(&r, "quot(R^2; (e11,0))").unwrap();
        assert_eq!(m2.order(), 32);
        let s = build_module(&r, "sum(R, quot(R;e12))").unwrap();
        assert_eq!(s.order(), 32);
        assert!(build_module(&r, "quot(R;e33)").is_err());
    }
}
