//! Inhomogeneous bar cochains `Map(G^p, Z/n)` and the simplicial coboundary.
//!
//! Coefficients are written additively: `μ_n ⊂ C^×` is identified with
//! `Z/n`. Tuples `(g₁, …, g_p)` are stored row-major, `g₁` most significant.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupTable};
use crate::text::Tokens;

/// The coefficient group `Z/n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct CyclicCoefficients {
    modulus: u32,
}

impl CyclicCoefficients {
    pub fn new(modulus: u32) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::Argument("modulus must be at least 1".into()));
        }
        Ok(CyclicCoefficients { modulus })
    }

    pub fn modulus(self) -> u32 {
        self.modulus
    }

    #[inline]
    pub fn reduce(self, x: i64) -> u32 {
        x.rem_euclid(i64::from(self.modulus)) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        ((u64::from(a) + u64::from(b)) % u64::from(self.modulus)) as u32
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        (self.modulus - a % self.modulus) % self.modulus
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }
}

/// Applies the face map `d_i : G^{p+1} → G^p` to a tuple of length `p + 1`.
///
/// `i = 0` drops the first entry, `1 ≤ i ≤ p` multiplies entries `i` and
/// `i + 1` (1-based), and `i = p + 1` drops the last entry.
pub fn face_map<G: GroupTable + ?Sized>(
    group: &G,
    p: usize,
    i: usize,
    tuple: &[usize],
) -> Result<Vec<usize>> {
    if tuple.len() != p + 1 {
        return Err(Error::Argument(format!(
            "face map of degree {p} needs a tuple of length {}, got {}",
            p + 1,
            tuple.len()
        )));
    }
    if i > p + 1 {
        return Err(Error::Argument(format!(
            "face index {i} out of range 0..={} for degree {p}",
            p + 1
        )));
    }
    if let Some(&g) = tuple.iter().find(|&&g| g >= group.order()) {
        return Err(Error::Argument(format!("element {g} out of range")));
    }
    let mut out = Vec::with_capacity(p);
    apply_face(group, i, tuple, &mut out);
    Ok(out)
}

#[inline]
fn apply_face<G: GroupTable + ?Sized>(group: &G, i: usize, tuple: &[usize], out: &mut Vec<usize>) {
    out.clear();
    let len = tuple.len();
    if i == 0 {
        out.extend_from_slice(&tuple[1..]);
    } else if i == len {
        out.extend_from_slice(&tuple[..len - 1]);
    } else {
        out.extend_from_slice(&tuple[..i - 1]);
        out.push(group.mul(tuple[i - 1], tuple[i]));
        out.extend_from_slice(&tuple[i + 1..]);
    }
}

/// Row-major index of a tuple of elements of a group of order `m`.
#[inline]
pub fn tuple_index(m: usize, tuple: &[usize]) -> usize {
    tuple.iter().fold(0, |acc, &g| acc * m + g)
}

/// Inverse of [`tuple_index`].
pub fn tuple_at(m: usize, p: usize, mut index: usize) -> Vec<usize> {
    let mut out = vec![0; p];
    for slot in out.iter_mut().rev() {
        *slot = index % m;
        index /= m;
    }
    out
}

/// A `p`-cochain on a group of order `m` with values in `Z/n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cochain {
    degree: usize,
    group_order: usize,
    coeffs: CyclicCoefficients,
    values: Vec<u32>,
}

impl Cochain {
    pub fn new(
        degree: usize,
        group_order: usize,
        coeffs: CyclicCoefficients,
        values: Vec<u32>,
    ) -> Result<Self> {
        let expected = cochain_len(group_order, degree)?;
        if values.len() != expected {
            return Err(Error::Mismatch(format!(
                "a degree-{degree} cochain on a group of order {group_order} has {expected} values, got {}",
                values.len()
            )));
        }
        if let Some(&v) = values.iter().find(|&&v| v >= coeffs.modulus()) {
            return Err(Error::Argument(format!(
                "value {v} not reduced mod {}",
                coeffs.modulus()
            )));
        }
        Ok(Cochain {
            degree,
            group_order,
            coeffs,
            values,
        })
    }

    pub fn zero(degree: usize, group_order: usize, coeffs: CyclicCoefficients) -> Self {
        let len = group_order.pow(degree as u32);
        Cochain {
            degree,
            group_order,
            coeffs,
            values: vec![0; len],
        }
    }

    /// Builds a cochain from a function of the tuple, reducing mod `n`.
    pub fn from_fn(
        degree: usize,
        group_order: usize,
        coeffs: CyclicCoefficients,
        mut f: impl FnMut(&[usize]) -> i64,
    ) -> Self {
        let len = group_order.pow(degree as u32);
        let values = (0..len)
            .map(|idx| coeffs.reduce(f(&tuple_at(group_order, degree, idx))))
            .collect();
        Cochain {
            degree,
            group_order,
            coeffs,
            values,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn group_order(&self) -> usize {
        self.group_order
    }

    pub fn coeffs(&self) -> CyclicCoefficients {
        self.coeffs
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn into_values(self) -> Vec<u32> {
        self.values
    }

    pub fn get(&self, tuple: &[usize]) -> u32 {
        debug_assert_eq!(tuple.len(), self.degree);
        self.values[tuple_index(self.group_order, tuple)]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    fn check_compatible(&self, other: &Cochain) -> Result<()> {
        if self.degree != other.degree
            || self.group_order != other.group_order
            || self.coeffs != other.coeffs
        {
            return Err(Error::Mismatch(format!(
                "cochains of (degree, group order, modulus) ({}, {}, {}) and ({}, {}, {})",
                self.degree,
                self.group_order,
                self.coeffs.modulus(),
                other.degree,
                other.group_order,
                other.coeffs.modulus()
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Cochain) -> Result<Cochain> {
        self.check_compatible(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| self.coeffs.add(a, b))
            .collect();
        Ok(Cochain { values, ..self.clone() })
    }

    pub fn sub(&self, other: &Cochain) -> Result<Cochain> {
        self.check_compatible(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| self.coeffs.sub(a, b))
            .collect();
        Ok(Cochain { values, ..self.clone() })
    }

    pub fn neg(&self) -> Cochain {
        let values = self.values.iter().map(|&a| self.coeffs.neg(a)).collect();
        Cochain { values, ..self.clone() }
    }

    /// Parses the cochain text format: a header `p n`, then `m^p` values.
    /// The group order comes from context.
    pub fn parse(text: &str, group_order: usize) -> Result<Self> {
        let mut tokens = Tokens::new(text);
        let (line, column, degree) = tokens.next_usize("cochain degree")?;
        if degree > 3 {
            return Err(Error::parse(line, column, format!("degree {degree} above 3 is not supported")));
        }
        let (line, column, n) = tokens.next_value::<u32>("modulus")?;
        let coeffs = CyclicCoefficients::new(n).map_err(|e| Error::parse(line, column, e.to_string()))?;
        let len = group_order.pow(degree as u32);
        let mut values = Vec::with_capacity(len);
        for idx in 0..len {
            let (line, column, v) = tokens.next_value::<u32>(&format!("value #{}", idx + 1))?;
            if v >= n {
                return Err(Error::parse(line, column, format!("value {v} not reduced mod {n}")));
            }
            values.push(v);
        }
        tokens.expect_end()?;
        Cochain::new(degree, group_order, coeffs, values)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.degree, self.coeffs.modulus());
        let width = self.group_order.max(1);
        for row in self.values.chunks(width) {
            let row: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}

fn cochain_len(group_order: usize, degree: usize) -> Result<usize> {
    group_order
        .checked_pow(degree as u32)
        .ok_or_else(|| Error::Capacity(format!("{group_order}^{degree} cochain values")))
}

/// The coboundary `(δc)(g₁,…,g_{p+1}) = Σ_{i=0}^{p+1} (−1)^i c(d_i(g₁,…,g_{p+1}))`.
pub fn delta_cochain(group: &FiniteGroup, c: &Cochain) -> Result<Cochain> {
    let m = group.order();
    if c.group_order != m {
        return Err(Error::Mismatch(format!(
            "cochain on a group of order {}, group has order {m}",
            c.group_order
        )));
    }
    let p = c.degree;
    let len = cochain_len(m, p + 1)?;
    let n = c.coeffs;
    let mut values = Vec::with_capacity(len);
    let mut face = Vec::with_capacity(p);
    for idx in 0..len {
        let tuple = tuple_at(m, p + 1, idx);
        let mut acc = 0u32;
        for i in 0..=p + 1 {
            apply_face(group, i, &tuple, &mut face);
            let v = c.values[tuple_index(m, &face)];
            acc = if i % 2 == 0 { n.add(acc, v) } else { n.sub(acc, v) };
        }
        values.push(acc);
    }
    Ok(Cochain {
        degree: p + 1,
        group_order: m,
        coeffs: n,
        values,
    })
}

/// `δ(δc)`, which must vanish identically.
pub fn delta_squared(group: &FiniteGroup, c: &Cochain) -> Result<Cochain> {
    delta_cochain(group, &delta_cochain(group, c)?)
}

/// First triple where the cocycle condition fails, if any.
pub fn cocycle_violation(group: &FiniteGroup, c: &Cochain) -> Result<Option<(usize, usize, usize)>> {
    if c.degree != 2 {
        return Err(Error::Argument(format!("cocycle check needs degree 2, got {}", c.degree)));
    }
    let dc = delta_cochain(group, c)?;
    let m = group.order();
    Ok(dc
        .values
        .iter()
        .position(|&v| v != 0)
        .map(|idx| (idx / (m * m), (idx / m) % m, idx % m)))
}

pub fn is_cocycle(group: &FiniteGroup, c: &Cochain) -> Result<bool> {
    Ok(cocycle_violation(group, c)?.is_none())
}
