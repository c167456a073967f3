//! Bounded module corpus used by the sweeps.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::module::{all_submodules, direct_sum, power, quotient, regular, Module};
use crate::ring::Ring;

/// Largest module order admitted by the direct-sum layer of bound 3.
pub const SUM_ORDER_LIMIT: usize = 256;

/// Default bound: quotients of `R` and `R²`.
pub const DEFAULT_BOUND: usize = 2;

/// Modules over `ring` up to `bound`:
///
/// * `1`: every cyclic module `R/S`;
/// * `2`: additionally every quotient of `R²`;
/// * `3`: additionally `M ⊕ N` for corpus modules of bound 2 with
///   `|M|·|N| ≤ 256`.
///
/// Modules are listed in a fixed order and are not deduplicated up to
/// isomorphism.
pub fn module_corpus(ring: &Ring, bound: usize) -> Result<Vec<Module>> {
    if !(1..=3).contains(&bound) {
        return Err(Error::Precondition(format!("corpus bound must be 1, 2 or 3, got {bound}")));
    }
    let mut out = quotients_of(&regular(ring))?;
    if bound >= 2 {
        out.extend(quotients_of(&power(ring, 2)?)?);
    }
    if bound >= 3 {
        let base = out.clone();
        let mut pairs = Vec::new();
        for i in 0..base.len() {
            for j in i..base.len() {
                if base[i].order() * base[j].order() <= SUM_ORDER_LIMIT
                    && base[i].order() > 1
                    && base[j].order() > 1
                {
                    pairs.push((i, j));
                }
            }
        }
        let sums: Vec<Module> = pairs
            .par_iter()
            .map(|&(i, j)| direct_sum(&base[i], &base[j]))
            .collect::<Result<_>>()?;
        out.extend(sums);
    }
    Ok(out)
}

/// Every quotient `M/S`, in canonical submodule order.
pub fn quotients_of(module: &Module) -> Result<Vec<Module>> {
    all_submodules(module)
        .par_iter()
        .map(|s| quotient(module, s).map(|q| q.module))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{cyclic, upper_triangular};
    use std::sync::Arc;

    #[test]
    fn corpus_sizes() {
        let z4: Ring = Arc::new(cyclic(4).unwrap());
        // quotients of Z4: Z4, Z2, 0
        let c1 = module_corpus(&z4, 1).unwrap();
        assert_eq!(c1.iter().map(|m| m.order()).collect::<Vec<_>>(), vec![4, 2, 1]);
        let c2 = module_corpus(&z4, 2).unwrap();
        assert!(c2.len() > c1.len());
        assert!(c2.iter().any(|m| m.order() == 16));
        let c3 = module_corpus(&z4, 3).unwrap();
        assert!(c3.iter().all(|m| m.order() <= 256));
        assert!(module_corpus(&z4, 0).is_err());
    }

    #[test]
    fn corpus_modules_validate() {
        let ut2: Ring = Arc::new(upper_triangular(2).unwrap());
        for m in module_corpus(&ut2, 2).unwrap() {
            m.validate().unwrap();
        }
    }
}
