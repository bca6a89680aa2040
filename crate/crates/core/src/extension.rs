//! The twisted product `(a, g) ⋆ (b, h) = (a + b + c(g, h), gh)` on `Z/n × G`.

use crate::cochain::{Cochain, CyclicCoefficients};
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupTable};

/// A central extension of `base` by `Z/n`, stored as a full table.
/// The pair `(a, g)` has index `g * n + a`.
#[derive(Debug, Clone)]
pub struct ExtensionGroup {
    base: FiniteGroup,
    coeffs: CyclicCoefficients,
    cocycle: Cochain,
    table: Vec<usize>,
    identity: usize,
}

impl ExtensionGroup {
    pub fn base(&self) -> &FiniteGroup {
        &self.base
    }

    pub fn coeffs(&self) -> CyclicCoefficients {
        self.coeffs
    }

    pub fn cocycle(&self) -> &Cochain {
        &self.cocycle
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    #[inline]
    pub fn index(&self, a: u32, g: usize) -> usize {
        g * self.coeffs.modulus() as usize + a as usize
    }

    #[inline]
    pub fn pair(&self, x: usize) -> (u32, usize) {
        let n = self.coeffs.modulus() as usize;
        ((x % n) as u32, x / n)
    }

    pub fn projection(&self, x: usize) -> usize {
        self.pair(x).1
    }

    /// The embedding `a ↦ (a − c(e, e), e)` of `Z/n` onto the kernel of the
    /// projection, sending `0` to the identity.
    pub fn inclusion(&self, a: u32) -> usize {
        let shift = self.cocycle.get(&[0, 0]);
        self.index(self.coeffs.sub(a, shift), 0)
    }

    /// Rows of the table as text, same layout as a group table file except
    /// that the identity need not be element 0.
    pub fn to_text(&self) -> String {
        let order = self.order();
        let mut out = format!("{order}\n");
        for row in self.table.chunks(order) {
            let row: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}

impl GroupTable for ExtensionGroup {
    fn order(&self) -> usize {
        self.base.order() * self.coeffs.modulus() as usize
    }

    #[inline]
    fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order() + b]
    }

    fn identity(&self) -> usize {
        self.identity
    }
}

/// Builds `Z/n ×_c G` and checks the group axioms on the resulting table.
///
/// Associativity of the table holds exactly when `c` is a cocycle; on
/// failure the error carries a base triple `(g, h, k)` where it breaks.
pub fn build_extension(base: &FiniteGroup, c: &Cochain) -> Result<ExtensionGroup> {
    let m = base.order();
    if c.degree() != 2 || c.group_order() != m {
        return Err(Error::Mismatch(format!(
            "need a degree-2 cochain on a group of order {m}, got degree {} on order {}",
            c.degree(),
            c.group_order()
        )));
    }
    let coeffs = c.coeffs();
    let n = coeffs.modulus() as usize;
    let order = n * m;
    let mut table = Vec::with_capacity(order * order);
    for x in 0..order {
        let (a, g) = ((x % n) as u32, x / n);
        for y in 0..order {
            let (b, h) = ((y % n) as u32, y / n);
            let ab = coeffs.add(coeffs.add(a, b), c.get(&[g, h]));
            table.push(base.mul(g, h) * n + ab as usize);
        }
    }
    let identity = coeffs.neg(c.get(&[0, 0])) as usize;
    let ext = ExtensionGroup {
        base: base.clone(),
        coeffs,
        cocycle: c.clone(),
        table,
        identity,
    };

    for x in 0..order {
        for y in 0..order {
            let xy = ext.mul(x, y);
            for z in 0..order {
                if ext.mul(xy, z) != ext.mul(x, ext.mul(y, z)) {
                    let (g, h, k) = (x / n, y / n, z / n);
                    return Err(Error::NotCocycle { g, h, k });
                }
            }
        }
    }
    for x in 0..order {
        if ext.mul(identity, x) != x || ext.mul(x, identity) != x {
            return Err(Error::NotAGroup(format!("element {identity} is not an identity")));
        }
        if !(0..order).any(|y| ext.mul(x, y) == identity && ext.mul(y, x) == identity) {
            return Err(Error::NotAGroup(format!("element {x} has no inverse")));
        }
    }
    Ok(ext)
}

/// The map `(a, g) ↦ (a + d(g), g)` from `Z/n ×_{c1} G` to `Z/n ×_{c2} G`,
/// which is an isomorphism when `c1 = c2 + δd`. Returned as an index table.
pub fn coboundary_isomorphism(from: &ExtensionGroup, d: &Cochain) -> Vec<usize> {
    let coeffs = from.coeffs;
    (0..from.order())
        .map(|x| {
            let (a, g) = from.pair(x);
            from.index(coeffs.add(a, d.get(&[g])), g)
        })
        .collect()
}

/// Whether `map` is a homomorphism `from → to` (it is checked entry by entry
/// against both tables).
pub fn is_homomorphism<A: GroupTable + ?Sized, B: GroupTable + ?Sized>(from: &A, to: &B, map: &[usize]) -> bool {
    let order = from.order();
    map.len() == order
        && (0..order).all(|x| (0..order).all(|y| map[from.mul(x, y)] == to.mul(map[x], map[y])))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cochain::delta_cochain;
    use crate::group::fingerprint;

    fn zn(n: u32) -> CyclicCoefficients {
        CyclicCoefficients::new(n).unwrap()
    }

    #[test]
    fn zero_cocycle_gives_direct_product() {
        let g = FiniteGroup::symmetric(3);
        let ext = build_extension(&g, &Cochain::zero(2, 6, zn(2))).unwrap();
        let direct = FiniteGroup::symmetric(3).product(&FiniteGroup::cyclic(2));
        assert_eq!(fingerprint(&ext), fingerprint(&direct));
        assert_eq!(ext.identity(), 0);
    }

    #[test]
    fn carry_cocycle_gives_cyclic_four() {
        let g = FiniteGroup::cyclic(2);
        let carry = Cochain::new(2, 2, zn(2), vec![0, 0, 0, 1]).unwrap();
        let ext = build_extension(&g, &carry).unwrap();
        assert_eq!(fingerprint(&ext), fingerprint(&FiniteGroup::cyclic(4)));
    }

    #[test]
    fn carry_mod_three_gives_cyclic_nine() {
        let g = FiniteGroup::cyclic(3);
        let carry = Cochain::from_fn(2, 3, zn(3), |t| i64::from(t[0] + t[1] >= 3));
        let ext = build_extension(&g, &carry).unwrap();
        assert_eq!(fingerprint(&ext).max_element_order(), 9);
    }

    #[test]
    fn non_normalized_identity() {
        // Constant c ≡ 1 is a cocycle (four faces cancel); identity is (−1, e).
        let g = FiniteGroup::cyclic(3);
        let c = Cochain::from_fn(2, 3, zn(4), |_| 1);
        let ext = build_extension(&g, &c).unwrap();
        assert_eq!(ext.pair(ext.identity()), (3, 0));
        assert_eq!(ext.inclusion(0), ext.identity());
    }

    #[test]
    fn rejects_non_cocycle_with_triple() {
        let g = FiniteGroup::cyclic(2);
        let bad = Cochain::new(2, 2, zn(2), vec![0, 1, 0, 1]).unwrap();
        let err = build_extension(&g, &bad).unwrap_err();
        let Error::NotCocycle { g: a, h: b, k: c } = err else {
            panic!("unexpected {err:?}")
        };
        let dc = delta_cochain(&g, &bad).unwrap();
        assert_ne!(dc.get(&[a, b, c]), 0);
    }

    #[test]
    fn projection_and_center() {
        let g = FiniteGroup::dihedral(3);
        let d = Cochain::from_fn(1, 6, zn(3), |t| t[0] as i64);
        let b = delta_cochain(&g, &d).unwrap();
        let ext = build_extension(&g, &b).unwrap();
        let proj: Vec<usize> = (0..ext.order()).map(|x| ext.projection(x)).collect();
        assert!(is_homomorphism(&ext, &g, &proj));
        for a in 0..3 {
            let z = ext.inclusion(a);
            assert_eq!(ext.projection(z), 0);
            assert!((0..ext.order()).all(|x| ext.mul(z, x) == ext.mul(x, z)));
        }
    }

    #[test]
    fn coboundary_shift_is_isomorphism() {
        let g = FiniteGroup::quaternion();
        let n = zn(2);
        let d = Cochain::from_fn(1, 8, n, |t| (t[0] % 3 == 1) as i64);
        let c2 = Cochain::zero(2, 8, n);
        let c1 = c2.add(&delta_cochain(&g, &d).unwrap()).unwrap();
        let e1 = build_extension(&g, &c1).unwrap();
        let e2 = build_extension(&g, &c2).unwrap();
        let phi = coboundary_isomorphism(&e1, &d);
        assert!(is_homomorphism(&e1, &e2, &phi));
    }
}
