//! `Z²`, `B²` and `H²` of a finite group with coefficients in `Z/n`.
//!
//! The cocycle condition is `Z/n`-linear in the `m²` values of a 2-cochain,
//! so all three are computed by exact linear algebra over `Z/n`
//! ([`crate::modlin`]). Class representatives are canonical remainders
//! modulo `B²`, which makes them pairwise non-cohomologous by construction.

use std::collections::HashSet;

use serde::Serialize;

use crate::cochain::{tuple_at, tuple_index, Cochain, CyclicCoefficients};
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupTable};
use crate::modlin::{LinearMap, Submodule};

pub const MAX_GROUP_ORDER: usize = 32;
pub const MAX_MODULUS: u32 = 8;

pub(crate) fn check_capacity(group: &FiniteGroup, coeffs: CyclicCoefficients) -> Result<()> {
    if group.order() > MAX_GROUP_ORDER {
        return Err(Error::Capacity(format!(
            "group order {} exceeds {MAX_GROUP_ORDER}",
            group.order()
        )));
    }
    if coeffs.modulus() > MAX_MODULUS {
        return Err(Error::Capacity(format!(
            "modulus {} exceeds {MAX_MODULUS}",
            coeffs.modulus()
        )));
    }
    Ok(())
}

/// Matrix of `δ : M^p → M^{p+1}` as integer columns (one per basis cochain).
fn delta_columns(group: &FiniteGroup, p: usize) -> Vec<Vec<i64>> {
    let m = group.order();
    let rows = m.pow(p as u32 + 1);
    let cols = m.pow(p as u32);
    let mut columns = vec![vec![0i64; rows]; cols];
    let mut face = Vec::with_capacity(p);
    for r in 0..rows {
        let tuple = tuple_at(m, p + 1, r);
        for i in 0..=p + 1 {
            face.clear();
            if i == 0 {
                face.extend_from_slice(&tuple[1..]);
            } else if i == p + 1 {
                face.extend_from_slice(&tuple[..p]);
            } else {
                face.extend_from_slice(&tuple[..i - 1]);
                face.push(group.mul(tuple[i - 1], tuple[i]));
                face.extend_from_slice(&tuple[i + 1..]);
            }
            let sign = if i % 2 == 0 { 1 } else { -1 };
            columns[tuple_index(m, &face)][r] += sign;
        }
    }
    columns
}

fn delta_map(group: &FiniteGroup, coeffs: CyclicCoefficients, p: usize) -> LinearMap {
    let m = group.order();
    LinearMap::from_columns(coeffs.modulus(), m.pow(p as u32 + 1), &delta_columns(group, p))
}

fn to_cochain(degree: usize, m: usize, coeffs: CyclicCoefficients, values: Vec<u32>) -> Cochain {
    Cochain::new(degree, m, coeffs, values).expect("module element has cochain shape")
}

/// The 2-cocycles `Z²(G; Z/n) = ker δ`.
#[derive(Debug, Clone)]
pub struct CocycleSpace {
    module: Submodule,
    group_order: usize,
    coeffs: CyclicCoefficients,
}

impl CocycleSpace {
    pub fn order(&self) -> u128 {
        self.module.order()
    }

    pub fn generators(&self) -> Vec<Cochain> {
        self.module
            .generators()
            .into_iter()
            .map(|v| to_cochain(2, self.group_order, self.coeffs, v))
            .collect()
    }

    pub fn contains(&self, c: &Cochain) -> bool {
        self.module.contains(c.values())
    }
}

pub fn cocycle_space(group: &FiniteGroup, coeffs: CyclicCoefficients) -> Result<CocycleSpace> {
    check_capacity(group, coeffs)?;
    Ok(CocycleSpace {
        module: delta_map(group, coeffs, 2).kernel(),
        group_order: group.order(),
        coeffs,
    })
}

/// The 2-coboundaries `B²(G; Z/n) = δ(M¹)`.
#[derive(Debug, Clone)]
pub struct CoboundarySpace {
    module: Submodule,
    delta: LinearMap,
    group_order: usize,
    coeffs: CyclicCoefficients,
}

impl CoboundarySpace {
    pub fn order(&self) -> u128 {
        self.module.order()
    }

    pub fn generators(&self) -> Vec<Cochain> {
        self.module
            .generators()
            .into_iter()
            .map(|v| to_cochain(2, self.group_order, self.coeffs, v))
            .collect()
    }

    /// Every coboundary; only sensible when [`Self::order`] is small.
    pub fn elements(&self) -> Vec<Cochain> {
        self.module
            .elements()
            .into_iter()
            .map(|v| to_cochain(2, self.group_order, self.coeffs, v))
            .collect()
    }

    pub fn contains(&self, c: &Cochain) -> bool {
        self.module.contains(c.values())
    }

    /// Canonical representative of the class `c + B²`.
    pub fn canonical(&self, c: &Cochain) -> Cochain {
        to_cochain(2, self.group_order, self.coeffs, self.module.reduce(c.values()))
    }

    /// Some `d` with `δd = c`.
    pub fn preimage(&self, c: &Cochain) -> Option<Cochain> {
        self.delta
            .solve(c.values())
            .map(|v| to_cochain(1, self.group_order, self.coeffs, v))
    }
}

pub fn coboundary_space(group: &FiniteGroup, coeffs: CyclicCoefficients) -> Result<CoboundarySpace> {
    check_capacity(group, coeffs)?;
    let delta = delta_map(group, coeffs, 1);
    Ok(CoboundarySpace {
        module: delta.image(),
        delta,
        group_order: group.order(),
        coeffs,
    })
}

#[derive(Debug, Clone)]
pub struct SecondCohomology {
    pub cocycles: CocycleSpace,
    pub coboundaries: CoboundarySpace,
    /// One canonical cocycle per class, the zero class first.
    pub representatives: Vec<Cochain>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CohomologyCounts {
    pub cocycles: u128,
    pub coboundaries: u128,
    pub classes: u128,
}

impl SecondCohomology {
    pub fn order(&self) -> u128 {
        self.representatives.len() as u128
    }

    pub fn counts(&self) -> CohomologyCounts {
        CohomologyCounts {
            cocycles: self.cocycles.order(),
            coboundaries: self.coboundaries.order(),
            classes: self.order(),
        }
    }

    /// Index into [`Self::representatives`] of the class of `c`, or `None`
    /// if `c` is not a cocycle.
    pub fn class_of(&self, c: &Cochain) -> Option<usize> {
        if !self.cocycles.contains(c) {
            return None;
        }
        let canon = self.coboundaries.canonical(c);
        self.representatives.iter().position(|r| *r == canon)
    }
}

/// Largest `|H²|` [`second_cohomology`] will enumerate representatives for.
pub const MAX_CLASSES: u128 = 1 << 16;

pub fn second_cohomology(group: &FiniteGroup, coeffs: CyclicCoefficients) -> Result<SecondCohomology> {
    let cocycles = cocycle_space(group, coeffs)?;
    let coboundaries = coboundary_space(group, coeffs)?;
    let (z, b) = (cocycles.order(), coboundaries.order());
    if z % b != 0 {
        return Err(Error::Numerical(format!("|B²| = {b} does not divide |Z²| = {z}")));
    }
    let expected = z / b;
    if expected > MAX_CLASSES {
        return Err(Error::Capacity(format!("|H²| = {expected} classes is too many to list")));
    }

    // Breadth-first closure of the canonical forms under the Z² generators.
    let zero = Cochain::zero(2, group.order(), coeffs);
    let gens = cocycles.generators();
    let mut seen: HashSet<Cochain> = HashSet::from([zero.clone()]);
    let mut representatives = vec![zero];
    let mut i = 0;
    while i < representatives.len() {
        let x = representatives[i].clone();
        i += 1;
        for g in &gens {
            let y = coboundaries.canonical(&x.add(g)?);
            if seen.insert(y.clone()) {
                representatives.push(y);
            }
        }
    }
    if representatives.len() as u128 != expected {
        return Err(Error::Numerical(format!(
            "enumerated {} classes, expected |Z²|/|B²| = {expected}",
            representatives.len()
        )));
    }
    Ok(SecondCohomology {
        cocycles,
        coboundaries,
        representatives,
    })
}

/// A 1-cochain `d` with `c1 − c2 = δd`, if the two are cohomologous.
pub fn cohomologous(group: &FiniteGroup, c1: &Cochain, c2: &Cochain) -> Result<Option<Cochain>> {
    if c1.degree() != 2 || c2.degree() != 2 {
        return Err(Error::Argument("cohomologous needs two degree-2 cochains".into()));
    }
    let diff = c1.sub(c2)?;
    if diff.group_order() != group.order() {
        return Err(Error::Mismatch("cochains and group disagree on the group order".into()));
    }
    let coboundaries = coboundary_space(group, c1.coeffs())?;
    Ok(coboundaries.preimage(&diff))
}

/// Brute-force enumeration of `Z²`, `B²` and the class partition, written
/// directly from the cocycle condition without any linear algebra.
pub mod exhaustive {
    use super::*;

    /// Largest `n^(m²)` the oracle will sweep.
    pub const MAX_SWEEP: u64 = 1 << 20;

    pub fn feasible(group_order: usize, modulus: u32) -> bool {
        let cells = (group_order * group_order) as u32;
        u64::from(modulus)
            .checked_pow(cells)
            .is_some_and(|total| total <= MAX_SWEEP)
    }

    #[derive(Debug, Clone)]
    pub struct Oracle {
        pub cocycles: Vec<Vec<u32>>,
        pub coboundaries: Vec<Vec<u32>>,
        /// `classes[i]` is the class index of `cocycles[i]`.
        pub classes: Vec<usize>,
        pub class_count: usize,
    }

    fn decode(mut idx: u64, n: u32, len: usize) -> Vec<u32> {
        let mut v = vec![0u32; len];
        for slot in v.iter_mut().rev() {
            *slot = (idx % u64::from(n)) as u32;
            idx /= u64::from(n);
        }
        v
    }

    pub fn run(group: &FiniteGroup, modulus: u32) -> Result<Oracle> {
        let m = group.order();
        if !feasible(m, modulus) {
            return Err(Error::Capacity(format!(
                "{modulus}^{} cochains exceed the exhaustive sweep limit",
                m * m
            )));
        }
        let n = i64::from(modulus);
        let at = |c: &[u32], g: usize, h: usize| i64::from(c[g * m + h]);

        let total = u64::from(modulus).pow((m * m) as u32);
        let mut cocycles = Vec::new();
        for idx in 0..total {
            let c = decode(idx, modulus, m * m);
            let ok = (0..m).all(|g| {
                (0..m).all(|h| {
                    (0..m).all(|k| {
                        // c(g,h) + c(gh,k) = c(g,hk) + c(h,k)
                        (at(&c, g, h) + at(&c, group.mul(g, h), k)
                            - at(&c, g, group.mul(h, k))
                            - at(&c, h, k))
                            .rem_euclid(n)
                            == 0
                    })
                })
            });
            if ok {
                cocycles.push(c);
            }
        }

        let mut coboundaries: Vec<Vec<u32>> = (0..u64::from(modulus).pow(m as u32))
            .map(|idx| {
                let d = decode(idx, modulus, m);
                let mut b = Vec::with_capacity(m * m);
                for g in 0..m {
                    for h in 0..m {
                        let v = i64::from(d[h]) - i64::from(d[group.mul(g, h)]) + i64::from(d[g]);
                        b.push(v.rem_euclid(n) as u32);
                    }
                }
                b
            })
            .collect();
        coboundaries.sort();
        coboundaries.dedup();

        let position: std::collections::HashMap<&[u32], usize> =
            cocycles.iter().enumerate().map(|(i, c)| (c.as_slice(), i)).collect();
        let mut classes = vec![usize::MAX; cocycles.len()];
        let mut class_count = 0;
        for i in 0..cocycles.len() {
            if classes[i] != usize::MAX {
                continue;
            }
            for b in &coboundaries {
                let shifted: Vec<u32> = cocycles[i]
                    .iter()
                    .zip(b)
                    .map(|(&x, &y)| ((i64::from(x) + i64::from(y)) % n) as u32)
                    .collect();
                let j = position[shifted.as_slice()];
                classes[j] = class_count;
            }
            class_count += 1;
        }

        Ok(Oracle {
            cocycles,
            coboundaries,
            classes,
            class_count,
        })
    }

    impl Oracle {
        /// Whether the oracle and `h2` agree on `|Z²|`, `|B²|`, `|H²|` and on
        /// which cocycles share a class.
        pub fn agrees_with(&self, h2: &SecondCohomology) -> Result<bool> {
            let counts = h2.counts();
            if counts.cocycles != self.cocycles.len() as u128
                || counts.coboundaries != self.coboundaries.len() as u128
                || counts.classes != self.class_count as u128
            {
                return Ok(false);
            }
            let coeffs = h2.representatives[0].coeffs();
            let m = h2.representatives[0].group_order();
            let mut to_linear = vec![None; self.class_count];
            let mut from_linear = vec![None; h2.representatives.len()];
            for (values, &k) in self.cocycles.iter().zip(&self.classes) {
                let c = Cochain::new(2, m, coeffs, values.clone())?;
                let Some(j) = h2.class_of(&c) else {
                    return Ok(false);
                };
                if *to_linear[k].get_or_insert(j) != j || *from_linear[j].get_or_insert(k) != k {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cochain::delta_cochain;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn zn(n: u32) -> CyclicCoefficients {
        CyclicCoefficients::new(n).unwrap()
    }

    fn klein() -> FiniteGroup {
        FiniteGroup::cyclic(2).product(&FiniteGroup::cyclic(2))
    }

    #[test]
    fn oracle_partition_agrees() {
        for (g, n) in [(FiniteGroup::cyclic(2), 2), (FiniteGroup::cyclic(3), 3), (klein(), 2), (FiniteGroup::cyclic(4), 2)] {
            let oracle = exhaustive::run(&g, n).unwrap();
            let h2 = second_cohomology(&g, zn(n)).unwrap();
            assert!(oracle.agrees_with(&h2).unwrap());
        }
    }

    #[test]
    fn cyclic_two_mod_two_counts() {
        // Oracle over all 16 maps: 4 cocycles, 2 coboundaries, 2 classes.
        let oracle = exhaustive::run(&FiniteGroup::cyclic(2), 2).unwrap();
        assert_eq!((oracle.cocycles.len(), oracle.coboundaries.len(), oracle.class_count), (4, 2, 2));
        let h2 = second_cohomology(&FiniteGroup::cyclic(2), zn(2)).unwrap();
        assert_eq!(
            h2.counts(),
            CohomologyCounts {
                cocycles: 4,
                coboundaries: 2,
                classes: 2
            }
        );
    }

    #[test]
    fn trivial_coefficients() {
        for g in [FiniteGroup::cyclic(3), FiniteGroup::symmetric(3), klein()] {
            let h2 = second_cohomology(&g, zn(1)).unwrap();
            assert_eq!(h2.counts().classes, 1);
            assert_eq!(h2.counts().cocycles, 1);
            assert_eq!(coboundary_space(&g, zn(1)).unwrap().order(), 1);
            let z = cocycle_space(&g, zn(1)).unwrap();
            assert!(z.generators().iter().all(Cochain::is_zero));
        }
    }

    #[test]
    fn coprime_order_kills_cohomology() {
        let h2 = second_cohomology(&FiniteGroup::cyclic(3), zn(2)).unwrap();
        assert_eq!(h2.order(), 1);
        let oracle = exhaustive::run(&FiniteGroup::cyclic(3), 2).unwrap();
        assert_eq!(oracle.class_count, 1);
    }

    #[test]
    fn cyclic_three_coboundaries() {
        let b = coboundary_space(&FiniteGroup::cyclic(3), zn(3)).unwrap();
        let oracle = exhaustive::run(&FiniteGroup::cyclic(3), 3).unwrap();
        assert_eq!(b.order(), oracle.coboundaries.len() as u128);
        assert_eq!(b.order(), 9);
    }

    #[test]
    fn klein_cocycle_count_matches_sweep() {
        let z = cocycle_space(&klein(), zn(2)).unwrap();
        let oracle = exhaustive::run(&klein(), 2).unwrap();
        assert_eq!(z.order(), oracle.cocycles.len() as u128);
        assert_eq!(oracle.class_count, 8);
    }

    #[test]
    fn generators_are_cocycles() {
        let g = FiniteGroup::symmetric(3);
        for n in [2, 3, 4, 6] {
            let z = cocycle_space(&g, zn(n)).unwrap();
            for c in z.generators() {
                assert!(delta_cochain(&g, &c).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn witness_for_shifted_cocycle() {
        let g = FiniteGroup::dihedral(4);
        let n = zn(4);
        let h2 = second_cohomology(&g, n).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for rep in &h2.representatives {
            let d = Cochain::from_fn(1, 8, n, |_| rng.gen_range(0..4));
            let shifted = rep.add(&delta_cochain(&g, &d).unwrap()).unwrap();
            let w = cohomologous(&g, &shifted, rep).unwrap().expect("witness");
            assert_eq!(shifted.sub(rep).unwrap(), delta_cochain(&g, &w).unwrap());
            assert_eq!(cohomologous(&g, rep, rep).unwrap().map(|w| w.is_zero()), Some(true));
        }
    }

    #[test]
    fn carry_and_zero_not_cohomologous() {
        let g = FiniteGroup::cyclic(2);
        let n = zn(2);
        let carry = Cochain::from_fn(2, 2, n, |t| (t[0] * t[1]) as i64);
        let zero = Cochain::zero(2, 2, n);
        assert_eq!(cohomologous(&g, &carry, &zero).unwrap(), None);
        // all four candidate d fail
        for bits in 0..4u32 {
            let d = Cochain::new(1, 2, n, vec![bits & 1, bits >> 1]).unwrap();
            assert_ne!(delta_cochain(&g, &d).unwrap(), carry);
        }
    }

    #[test]
    fn capacity_guard() {
        let big = FiniteGroup::cyclic(33);
        assert!(matches!(cocycle_space(&big, zn(2)), Err(Error::Capacity(_))));
        assert!(matches!(
            coboundary_space(&FiniteGroup::cyclic(2), zn(9)),
            Err(Error::Capacity(_))
        ));
        assert!(!exhaustive::feasible(5, 2));
        assert!(exhaustive::feasible(4, 2));
    }

    #[test]
    fn class_of_rejects_non_cocycles() {
        let g = FiniteGroup::cyclic(2);
        let h2 = second_cohomology(&g, zn(2)).unwrap();
        let bad = Cochain::new(2, 2, zn(2), vec![0, 1, 0, 1]).unwrap();
        assert_eq!(h2.class_of(&bad), None);
        let carry = Cochain::from_fn(2, 2, zn(2), |t| (t[0] * t[1]) as i64);
        assert_eq!(h2.class_of(&carry), Some(1));
    }
}
