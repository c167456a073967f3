//! Finite lattices stored as explicit meet/join tables.

use crate::bitset::BitSet;
use crate::error::{Error, Result};

/// A finite lattice on `0..size` with precomputed meet and join tables.
///
/// Elements optionally carry the bitset they stand for (a submodule, an
/// ideal); abstract lattices such as N₅ leave it empty.
#[derive(Clone, Debug)]
pub struct FiniteLattice {
    elements: Vec<BitSet>,
    size: usize,
    meet: Vec<u32>,
    join: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Modularity {
    Pass,
    /// `x ≤ z` but `x ∨ (y ∧ z) ≠ (x ∨ y) ∧ z`.
    Witness { x: usize, y: usize, z: usize },
}

impl Modularity {
    pub fn is_pass(&self) -> bool {
        matches!(self, Modularity::Pass)
    }
}

impl FiniteLattice {
    /// Builds a lattice from a family and binary operations that must return
    /// members of the family. The tables are checked against the lattice
    /// axioms except associativity (see [`FiniteLattice::validate`]).
    pub fn from_family<M, J>(elements: Vec<BitSet>, meet: M, join: J) -> Result<FiniteLattice>
    where
        M: Fn(&BitSet, &BitSet) -> BitSet,
        J: Fn(&BitSet, &BitSet) -> BitSet,
    {
        let size = elements.len();
        let index = |set: &BitSet| -> Result<u32> {
            elements
                .binary_search(set)
                .map(|i| i as u32)
                .map_err(|_| Error::Fault(format!("lattice operation left the family: {set:?}")))
        };
        if elements.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Precondition("lattice family must be sorted and distinct".into()));
        }
        let mut meet_t = vec![0u32; size * size];
        let mut join_t = vec![0u32; size * size];
        for i in 0..size {
            for j in i..size {
                let m = index(&meet(&elements[i], &elements[j]))?;
                let k = index(&join(&elements[i], &elements[j]))?;
                meet_t[i * size + j] = m;
                meet_t[j * size + i] = m;
                join_t[i * size + j] = k;
                join_t[j * size + i] = k;
            }
        }
        let lattice = FiniteLattice {
            elements,
            size,
            meet: meet_t,
            join: join_t,
        };
        lattice.check_pointwise()?;
        Ok(lattice)
    }

    /// Abstract lattice from raw tables, fully validated.
    pub fn from_tables(size: usize, meet: Vec<usize>, join: Vec<usize>) -> Result<FiniteLattice> {
        if meet.len() != size * size || join.len() != size * size {
            return Err(Error::Table("lattice tables have the wrong shape".into()));
        }
        if meet.iter().chain(&join).any(|&v| v >= size) {
            return Err(Error::Table("lattice table entry out of range".into()));
        }
        let lattice = FiniteLattice {
            elements: Vec::new(),
            size,
            meet: meet.into_iter().map(|v| v as u32).collect(),
            join: join.into_iter().map(|v| v as u32).collect(),
        };
        lattice.validate()?;
        Ok(lattice)
    }

    /// A chain `0 < 1 < … < size-1`.
    pub fn chain(size: usize) -> FiniteLattice {
        let meet = (0..size * size).map(|k| (k / size).min(k % size)).collect();
        let join = (0..size * size).map(|k| (k / size).max(k % size)).collect();
        FiniteLattice::from_tables(size, meet, join).expect("chains are lattices")
    }

    /// The pentagon N₅: `0 < a < c < 1`, `0 < b < 1`, `b` incomparable to `a, c`.
    pub fn pentagon() -> FiniteLattice {
        // 0 = bottom, 1 = a, 2 = c, 3 = b, 4 = top
        let leq = |x: usize, y: usize| -> bool {
            x == y || x == 0 || y == 4 || (x == 1 && y == 2)
        };
        let n = 5;
        let mut meet = vec![0; n * n];
        let mut join = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                let lower: Vec<usize> = (0..n).filter(|&z| leq(z, x) && leq(z, y)).collect();
                let upper: Vec<usize> = (0..n).filter(|&z| leq(x, z) && leq(y, z)).collect();
                meet[x * n + y] = *lower.iter().find(|&&m| lower.iter().all(|&z| leq(z, m))).unwrap();
                join[x * n + y] = *upper.iter().find(|&&j| upper.iter().all(|&z| leq(j, z))).unwrap();
            }
        }
        FiniteLattice::from_tables(n, meet, join).expect("N5 is a lattice")
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn elements(&self) -> &[BitSet] {
        &self.elements
    }

    #[inline]
    pub fn meet(&self, x: usize, y: usize) -> usize {
        self.meet[x * self.size + y] as usize
    }

    #[inline]
    pub fn join(&self, x: usize, y: usize) -> usize {
        self.join[x * self.size + y] as usize
    }

    #[inline]
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.meet(x, y) == x
    }

    fn check_pointwise(&self) -> Result<()> {
        let n = self.size;
        for x in 0..n {
            if self.meet(x, x) != x || self.join(x, x) != x {
                return Err(Error::Table(format!("lattice operations not idempotent at {x}")));
            }
            for y in 0..n {
                if self.meet(x, y) != self.meet(y, x) || self.join(x, y) != self.join(y, x) {
                    return Err(Error::Table(format!("lattice operations not commutative at ({x},{y})")));
                }
                if self.meet(x, self.join(x, y)) != x || self.join(x, self.meet(x, y)) != x {
                    return Err(Error::Table(format!("absorption fails at ({x},{y})")));
                }
            }
        }
        Ok(())
    }

    /// Full check of the lattice axioms, including associativity (cubic).
    pub fn validate(&self) -> Result<()> {
        self.check_pointwise()?;
        let n = self.size;
        for x in 0..n {
            for y in 0..n {
                let (m, j) = (self.meet(x, y), self.join(x, y));
                for z in 0..n {
                    if self.meet(m, z) != self.meet(x, self.meet(y, z)) {
                        return Err(Error::Table(format!("meet not associative at ({x},{y},{z})")));
                    }
                    if self.join(j, z) != self.join(x, self.join(y, z)) {
                        return Err(Error::Table(format!("join not associative at ({x},{y},{z})")));
                    }
                }
            }
        }
        Ok(())
    }

    /// Searches for `x ≤ z` with `x ∨ (y ∧ z) ≠ (x ∨ y) ∧ z`; reports the
    /// least witness in `(x, z, y)` scan order.
    pub fn is_modular(&self) -> Modularity {
        let n = self.size;
        for x in 0..n {
            for z in 0..n {
                if x == z || !self.leq(x, z) {
                    continue;
                }
                for y in 0..n {
                    if self.join(x, self.meet(y, z)) != self.meet(self.join(x, y), z) {
                        return Modularity::Witness { x, y, z };
                    }
                }
            }
        }
        Modularity::Pass
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pentagon_is_not_modular() {
        let n5 = FiniteLattice::pentagon();
        match n5.is_modular() {
            Modularity::Witness { x, y, z } => {
                assert!(n5.leq(x, z));
                assert_ne!(n5.join(x, n5.meet(y, z)), n5.meet(n5.join(x, y), z));
            }
            Modularity::Pass => panic!("N5 reported modular"),
        }
    }

    #[test]
    fn chains_are_modular() {
        for k in 1..6 {
            assert!(FiniteLattice::chain(k).is_modular().is_pass());
        }
    }

    #[test]
    fn diamond_m3_is_modular() {
        // 0 < a, b, c < 1 pairwise incomparable atoms.
        let n = 5;
        let leq = |x: usize, y: usize| x == y || x == 0 || y == 4;
        let mut meet = vec![0; n * n];
        let mut join = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                meet[x * n + y] = if leq(x, y) { x } else if leq(y, x) { y } else { 0 };
                join[x * n + y] = if leq(x, y) { y } else if leq(y, x) { x } else { 4 };
            }
        }
        let m3 = FiniteLattice::from_tables(n, meet, join).unwrap();
        assert!(m3.is_modular().is_pass());
    }

    #[test]
    fn non_lattice_tables_rejected() {
        // meet not commutative
        let meet = vec![0, 0, 1, 1];
        let join = vec![0, 1, 1, 1];
        assert!(FiniteLattice::from_tables(2, meet, join).is_err());
    }
}
