//! Finite groups given by multiplication tables.
//!
//! Elements are indices `0..m` and element `0` is always the identity. The
//! [`GroupTable`] trait abstracts over anything with a finite multiplication
//! table so that fingerprints can be taken of base groups and of extensions
//! alike.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::text::Tokens;

/// A finite group presented by its multiplication table.
pub trait GroupTable {
    fn order(&self) -> usize;
    fn mul(&self, a: usize, b: usize) -> usize;
    fn identity(&self) -> usize;

    fn inverse(&self, a: usize) -> usize {
        let e = self.identity();
        (0..self.order())
            .find(|&b| self.mul(a, b) == e)
            .expect("group table without inverse")
    }

    fn element_order(&self, a: usize) -> usize {
        let e = self.identity();
        let mut x = a;
        let mut k = 1;
        while x != e {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<usize>,
}

impl FiniteGroup {
    /// Builds a group from a row-major table, `table[g * m + h] = g·h`.
    ///
    /// Checks the Latin-square property, that `0` is a two-sided identity,
    /// and associativity on all `m³` triples.
    pub fn from_table(order: usize, table: Vec<usize>) -> Result<Self> {
        if order == 0 {
            return Err(Error::NotAGroup("order must be positive".into()));
        }
        if table.len() != order * order {
            return Err(Error::NotAGroup(format!(
                "table has {} entries, expected {}",
                table.len(),
                order * order
            )));
        }
        if let Some(&bad) = table.iter().find(|&&x| x >= order) {
            return Err(Error::NotAGroup(format!("entry {bad} out of range 0..{order}")));
        }
        let group = FiniteGroup { order, table };
        group.validate()?;
        Ok(group)
    }

    fn validate(&self) -> Result<()> {
        let m = self.order;
        for g in 0..m {
            if self.mul(0, g) != g || self.mul(g, 0) != g {
                return Err(Error::NotAGroup(format!("element 0 is not an identity at {g}")));
            }
        }
        let mut seen = vec![false; m];
        for g in 0..m {
            seen.iter_mut().for_each(|s| *s = false);
            for h in 0..m {
                let x = self.mul(g, h);
                if std::mem::replace(&mut seen[x], true) {
                    return Err(Error::NotAGroup(format!("row {g} repeats {x}")));
                }
            }
            seen.iter_mut().for_each(|s| *s = false);
            for h in 0..m {
                let x = self.mul(h, g);
                if std::mem::replace(&mut seen[x], true) {
                    return Err(Error::NotAGroup(format!("column {g} repeats {x}")));
                }
            }
        }
        for g in 0..m {
            for h in 0..m {
                let gh = self.mul(g, h);
                for k in 0..m {
                    if self.mul(gh, k) != self.mul(g, self.mul(h, k)) {
                        return Err(Error::NotAGroup(format!(
                            "associativity fails at ({g}, {h}, {k})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Parses the text table format: the order `m` on the first line, then
    /// `m` rows of `m` whitespace-separated indices.
    pub fn parse(text: &str) -> Result<Self> {
        let mut tokens = Tokens::new(text);
        let (line, _, m) = tokens.next_usize("group order")?;
        if m == 0 {
            return Err(Error::parse(line, 1, "group order must be positive"));
        }
        let mut table = Vec::with_capacity(m * m);
        for g in 0..m {
            for h in 0..m {
                let (line, column, x) = tokens.next_usize(&format!("entry ({g}, {h})"))?;
                if x >= m {
                    return Err(Error::parse(line, column, format!("index {x} out of range 0..{m}")));
                }
                table.push(x);
            }
        }
        tokens.expect_end()?;
        FiniteGroup::from_table(m, table)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.order);
        for row in self.table.chunks(self.order) {
            let row: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn cyclic(m: usize) -> Self {
        assert!(m > 0);
        let table = (0..m * m).map(|i| (i / m + i % m) % m).collect();
        FiniteGroup { order: m, table }
    }

    /// Direct product; `(a, b)` has index `a * |other| + b`.
    pub fn product(&self, other: &FiniteGroup) -> Self {
        let (m1, m2) = (self.order, other.order);
        let m = m1 * m2;
        let mut table = Vec::with_capacity(m * m);
        for x in 0..m {
            for y in 0..m {
                let a = self.mul(x / m2, y / m2);
                let b = other.mul(x % m2, y % m2);
                table.push(a * m2 + b);
            }
        }
        FiniteGroup { order: m, table }
    }

    /// Symmetric group on `k` letters, identity permutation first.
    pub fn symmetric(k: usize) -> Self {
        let mut perms: Vec<Vec<usize>> = vec![(0..k).collect()];
        let mut current: Vec<usize> = (0..k).collect();
        while next_permutation(&mut current) {
            perms.push(current.clone());
        }
        Self::from_permutations(&perms)
    }

    /// Dihedral group of order `2k`: rotations `r^i` are `0..k`, reflections
    /// `s r^i` are `k..2k`.
    pub fn dihedral(k: usize) -> Self {
        assert!(k >= 1);
        let m = 2 * k;
        let decode = |x: usize| (x / k, x % k); // (reflection bit, rotation)
        let mut table = Vec::with_capacity(m * m);
        for x in 0..m {
            for y in 0..m {
                let (s1, r1) = decode(x);
                let (s2, r2) = decode(y);
                // s^a r^b · s^c r^d = s^(a+c) r^((-1)^c b + d)
                let r = if s2 == 0 { (r1 + r2) % k } else { (k - r1 + r2) % k };
                table.push(((s1 + s2) % 2) * k + r);
            }
        }
        FiniteGroup { order: m, table }
    }

    /// Quaternion group `{±1, ±i, ±j, ±k}` in that index order.
    pub fn quaternion() -> Self {
        // Index = 2 * unit + sign, units ordered 1, i, j, k.
        const UNIT: [[(usize, bool); 4]; 4] = [
            [(0, false), (1, false), (2, false), (3, false)],
            [(1, false), (0, true), (3, false), (2, true)],
            [(2, false), (3, true), (0, true), (1, false)],
            [(3, false), (2, false), (1, true), (0, true)],
        ];
        let mut table = Vec::with_capacity(64);
        for x in 0..8 {
            for y in 0..8 {
                let (ux, sx) = (x / 2, x % 2 == 1);
                let (uy, sy) = (y / 2, y % 2 == 1);
                let (u, s) = UNIT[ux][uy];
                table.push(u * 2 + usize::from(s ^ sx ^ sy));
            }
        }
        FiniteGroup { order: 8, table }
    }

    fn from_permutations(perms: &[Vec<usize>]) -> Self {
        let index: BTreeMap<&[usize], usize> =
            perms.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();
        let m = perms.len();
        let mut table = Vec::with_capacity(m * m);
        for p in perms {
            for q in perms {
                // (p·q)(x) = p(q(x))
                let pq: Vec<usize> = q.iter().map(|&x| p[x]).collect();
                table.push(index[pq.as_slice()]);
            }
        }
        FiniteGroup { order: m, table }
    }
}

fn next_permutation(v: &mut [usize]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

impl GroupTable for FiniteGroup {
    fn order(&self) -> usize {
        self.order
    }

    #[inline]
    fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    fn identity(&self) -> usize {
        0
    }
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup").field("order", &self.order).finish()
    }
}

/// Cheap isomorphism invariants. Different fingerprints prove two groups
/// non-isomorphic; equal fingerprints prove nothing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GroupFingerprint {
    pub order: usize,
    /// Sorted element orders.
    pub order_multiset: Vec<usize>,
    pub is_abelian: bool,
    pub center_order: usize,
    pub derived_order: usize,
}

impl GroupFingerprint {
    pub fn involutions(&self) -> usize {
        self.order_multiset.iter().filter(|&&k| k == 2).count()
    }

    pub fn max_element_order(&self) -> usize {
        self.order_multiset.iter().copied().max().unwrap_or(1)
    }
}

pub fn fingerprint<G: GroupTable + ?Sized>(group: &G) -> GroupFingerprint {
    let m = group.order();
    let mut order_multiset: Vec<usize> = (0..m).map(|a| group.element_order(a)).collect();
    order_multiset.sort_unstable();

    let commutes = |a: usize, b: usize| group.mul(a, b) == group.mul(b, a);
    let center_order = (0..m).filter(|&a| (0..m).all(|b| commutes(a, b))).count();
    let is_abelian = center_order == m;

    let inv: Vec<usize> = (0..m).map(|a| group.inverse(a)).collect();
    let mut commutators = Vec::new();
    for a in 0..m {
        for b in 0..m {
            commutators.push(group.mul(group.mul(a, b), group.mul(inv[a], inv[b])));
        }
    }
    let derived_order = generated_subgroup(group, &commutators).len();

    GroupFingerprint {
        order: m,
        order_multiset,
        is_abelian,
        center_order,
        derived_order,
    }
}

/// Closure of `generators` under multiplication (finite, so this is the
/// generated subgroup).
pub fn generated_subgroup<G: GroupTable + ?Sized>(group: &G, generators: &[usize]) -> Vec<usize> {
    let m = group.order();
    let mut member = vec![false; m];
    let e = group.identity();
    member[e] = true;
    let mut elements = vec![e];
    let mut gens: Vec<usize> = generators.to_vec();
    gens.sort_unstable();
    gens.dedup();
    let mut frontier = 0;
    while frontier < elements.len() {
        let x = elements[frontier];
        frontier += 1;
        for &s in &gens {
            let y = group.mul(x, s);
            if !member[y] {
                member[y] = true;
                elements.push(y);
            }
        }
    }
    elements.sort_unstable();
    elements
}
