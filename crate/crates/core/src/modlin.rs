//! Submodules of `(Z/n)^len` in canonical (Howell) form.
//!
//! `Z/n` splits by the Chinese remainder theorem into local rings `Z/p^e`.
//! Over a local ring every nonzero entry is a unit times a power of `p`, so
//! echelon forms with pivots `p^v` exist. The Howell form additionally
//! stores, for each pivot row `r` with pivot `p^v`, enough rows to span
//! `p^(e-v)·r`. With that property:
//!
//! - reduction of any vector against the rows is canonical (two vectors
//!   differing by a module element reduce to the same remainder);
//! - the rows whose pivots lie at or after column `k` span exactly the module
//!   elements whose first `k` coordinates vanish;
//! - the module has `∏ p^(e-v)` elements.
//!
//! The second property gives kernels and solutions of linear systems from
//! one decomposition of the augmented generators `(A x, x)`.

/// Prime-power factorization `n = ∏ p^e`.
pub fn prime_powers(mut n: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn inverse_mod(a: u32, q: u32) -> u32 {
    let (mut r0, mut r1) = (i64::from(q), i64::from(a % q));
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let k = r0 / r1;
        (r0, r1) = (r1, r0 - k * r1);
        (t0, t1) = (t1, t0 - k * t1);
    }
    debug_assert_eq!(r0, 1, "{a} is not a unit mod {q}");
    t0.rem_euclid(i64::from(q)) as u32
}

/// Howell form of a submodule of `(Z/p^e)^len`.
#[derive(Debug, Clone)]
pub struct LocalHowell {
    p: u32,
    q: u32,
    len: usize,
    /// Rows sorted by pivot column; each pivot entry is exactly `p^v`.
    rows: Vec<Vec<u32>>,
    pivots: Vec<(usize, u32)>,
}

impl LocalHowell {
    pub fn new(p: u32, e: u32, len: usize, generators: impl IntoIterator<Item = Vec<u32>>) -> Self {
        let q = p.pow(e);
        let mut pending: Vec<Vec<u32>> = generators
            .into_iter()
            .map(|mut v| {
                debug_assert_eq!(v.len(), len);
                v.iter_mut().for_each(|x| *x %= q);
                v
            })
            .filter(|v| v.iter().any(|&x| x != 0))
            .collect();

        let mut rows = Vec::new();
        let mut pivots = Vec::new();
        for col in 0..len {
            if pending.is_empty() {
                break;
            }
            // Pivot: the row with least p-adic valuation in this column.
            let best = pending
                .iter()
                .enumerate()
                .filter(|(_, v)| v[col] != 0)
                .min_by_key(|(_, v)| valuation(v[col], p))
                .map(|(i, _)| i);
            let Some(best) = best else { continue };
            let mut pivot = pending.swap_remove(best);
            let v = valuation(pivot[col], p);
            let pv = p.pow(v);
            let unit = pivot[col] / pv;
            let unit_inv = inverse_mod(unit, q);
            scale(&mut pivot, unit_inv, q);
            debug_assert_eq!(pivot[col], pv);

            for row in pending.iter_mut() {
                if row[col] != 0 {
                    let k = q - row[col] / pv; // row[col] is divisible by p^v
                    axpy(row, k, &pivot, q);
                    debug_assert_eq!(row[col], 0);
                }
            }
            if v > 0 {
                let mut sat = pivot.clone();
                scale(&mut sat, q / pv, q);
                pending.push(sat);
            }
            pending.retain(|r| r.iter().any(|&x| x != 0));
            rows.push(pivot);
            pivots.push((col, pv));
        }

        let mut form = LocalHowell {
            p,
            q,
            len,
            rows,
            pivots,
        };
        form.back_reduce();
        form
    }

    fn back_reduce(&mut self) {
        for i in (0..self.rows.len()).rev() {
            let (col, pv) = self.pivots[i];
            let (above, below) = self.rows.split_at_mut(i);
            let pivot = &below[0];
            for row in above.iter_mut() {
                let k = row[col] / pv;
                if k != 0 {
                    axpy(row, self.q - k, pivot, self.q);
                }
            }
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[(usize, u32)] {
        &self.pivots
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn local_modulus(&self) -> u32 {
        self.q
    }

    /// Number of elements.
    pub fn order(&self) -> u128 {
        self.pivots
            .iter()
            .map(|&(_, pv)| u128::from(self.q / pv))
            .product()
    }

    /// Canonical remainder of `x` modulo the submodule.
    pub fn reduce(&self, x: &mut [u32]) {
        for (row, &(col, pv)) in self.rows.iter().zip(&self.pivots) {
            let k = (x[col] % self.q) / pv;
            if k != 0 {
                axpy(x, self.q - k, row, self.q);
            }
        }
    }

    /// Rows whose pivots lie in columns `≥ start`, truncated to those
    /// columns. They form the Howell form of the elements vanishing on the
    /// first `start` coordinates.
    pub fn tail(&self, start: usize) -> LocalHowell {
        let mut rows = Vec::new();
        let mut pivots = Vec::new();
        for (row, &(col, pv)) in self.rows.iter().zip(&self.pivots) {
            if col >= start {
                rows.push(row[start..].to_vec());
                pivots.push((col - start, pv));
            }
        }
        LocalHowell {
            p: self.p,
            q: self.q,
            len: self.len - start,
            rows,
            pivots,
        }
    }

    /// Rows whose pivots lie in columns `< end`, truncated to those columns.
    pub fn head(&self, end: usize) -> LocalHowell {
        let mut rows = Vec::new();
        let mut pivots = Vec::new();
        for (row, &(col, pv)) in self.rows.iter().zip(&self.pivots) {
            if col < end {
                rows.push(row[..end].to_vec());
                pivots.push((col, pv));
            }
        }
        LocalHowell {
            p: self.p,
            q: self.q,
            len: end,
            rows,
            pivots,
        }
    }
}

fn valuation(mut x: u32, p: u32) -> u32 {
    debug_assert!(x != 0);
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

fn scale(v: &mut [u32], k: u32, q: u32) {
    for x in v.iter_mut() {
        *x = ((u64::from(*x) * u64::from(k)) % u64::from(q)) as u32;
    }
}

/// `y += k·x (mod q)`.
fn axpy(y: &mut [u32], k: u32, x: &[u32], q: u32) {
    let (k, q) = (u64::from(k), u64::from(q));
    for (a, &b) in y.iter_mut().zip(x) {
        *a = ((u64::from(*a) + k * u64::from(b)) % q) as u32;
    }
}

/// A submodule of `(Z/n)^len`, stored as one Howell form per prime power.
#[derive(Debug, Clone)]
pub struct Submodule {
    n: u32,
    len: usize,
    parts: Vec<LocalHowell>,
}

impl Submodule {
    pub fn span(n: u32, len: usize, generators: &[Vec<u32>]) -> Self {
        let parts = prime_powers(n)
            .into_iter()
            .map(|(p, e)| {
                let q = p.pow(e);
                LocalHowell::new(p, e, len, generators.iter().map(|g| g.iter().map(|x| x % q).collect()))
            })
            .collect();
        Submodule { n, len, parts }
    }

    fn from_parts(n: u32, len: usize, parts: Vec<LocalHowell>) -> Self {
        Submodule { n, len, parts }
    }

    pub fn modulus(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn order(&self) -> u128 {
        self.parts.iter().map(LocalHowell::order).product()
    }

    /// Generators over `Z/n`, lifted from each local part by CRT.
    pub fn generators(&self) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        for part in &self.parts {
            for row in part.rows() {
                out.push(lift_local(self.n, part.local_modulus(), row));
            }
        }
        out
    }

    /// Canonical representative of `x + M`.
    pub fn reduce(&self, x: &[u32]) -> Vec<u32> {
        let mut out = vec![0u32; self.len];
        for part in &self.parts {
            let q = part.local_modulus();
            let mut local: Vec<u32> = x.iter().map(|v| v % q).collect();
            part.reduce(&mut local);
            let lifted = lift_local(self.n, q, &local);
            for (o, l) in out.iter_mut().zip(lifted) {
                *o = (*o + l) % self.n;
            }
        }
        out
    }

    pub fn contains(&self, x: &[u32]) -> bool {
        self.reduce(x).iter().all(|&v| v == 0)
    }

    /// Enumerates every element. Intended for small modules only.
    pub fn elements(&self) -> Vec<Vec<u32>> {
        let gens = self.generators();
        let mut seen = std::collections::HashSet::new();
        let zero = vec![0u32; self.len];
        seen.insert(zero.clone());
        let mut queue = vec![zero];
        let mut i = 0;
        while i < queue.len() {
            let x = queue[i].clone();
            i += 1;
            for g in &gens {
                let y: Vec<u32> = x.iter().zip(g).map(|(&a, &b)| (a + b) % self.n).collect();
                if seen.insert(y.clone()) {
                    queue.push(y);
                }
            }
        }
        queue.sort();
        queue
    }
}

/// The element of `Z/n` congruent to `x` mod `q` and to `0` mod `n / q`.
fn lift_local(n: u32, q: u32, x: &[u32]) -> Vec<u32> {
    if n == q {
        return x.to_vec();
    }
    let cofactor = n / q;
    let coef = u64::from(cofactor) * u64::from(inverse_mod(cofactor % q, q));
    x.iter()
        .map(|&v| ((u64::from(v) * coef) % u64::from(n)) as u32)
        .collect()
}

/// A linear map `(Z/n)^cols → (Z/n)^rows` given by its columns, decomposed
/// once so that image, kernel and solutions can all be read off.
#[derive(Debug, Clone)]
pub struct LinearMap {
    n: u32,
    rows: usize,
    cols: usize,
    /// Howell form of the graph `{(A x, x)}` per prime power.
    graph: Vec<LocalHowell>,
}

impl LinearMap {
    /// `columns[j]` is the image of the `j`-th basis vector, as integers
    /// (reduced mod each prime power internally).
    pub fn from_columns(n: u32, rows: usize, columns: &[Vec<i64>]) -> Self {
        let cols = columns.len();
        let graph = prime_powers(n)
            .into_iter()
            .map(|(p, e)| {
                let q = p.pow(e);
                let gens = columns.iter().enumerate().map(|(j, col)| {
                    debug_assert_eq!(col.len(), rows);
                    let mut v: Vec<u32> = col.iter().map(|&x| x.rem_euclid(i64::from(q)) as u32).collect();
                    v.extend((0..cols).map(|k| u32::from(k == j)));
                    v
                });
                LocalHowell::new(p, e, rows + cols, gens)
            })
            .collect();
        LinearMap { n, rows, cols, graph }
    }

    pub fn image(&self) -> Submodule {
        Submodule::from_parts(self.n, self.rows, self.graph.iter().map(|g| g.head(self.rows)).collect())
    }

    pub fn kernel(&self) -> Submodule {
        Submodule::from_parts(self.n, self.cols, self.graph.iter().map(|g| g.tail(self.rows)).collect())
    }

    /// Some `x` with `A x = b`, if one exists.
    pub fn solve(&self, b: &[u32]) -> Option<Vec<u32>> {
        assert_eq!(b.len(), self.rows);
        let mut x = vec![0u32; self.cols];
        for part in &self.graph {
            let q = part.local_modulus();
            let mut v: Vec<u32> = b.iter().map(|&y| y % q).collect();
            v.resize(self.rows + self.cols, 0);
            // Reducing (b, 0) by elements (A y, y) leaves (b - A y, -y).
            part.reduce(&mut v);
            if v[..self.rows].iter().any(|&y| y != 0) {
                return None;
            }
            let neg: Vec<u32> = v[self.rows..].iter().map(|&y| (q - y) % q).collect();
            for (xi, li) in x.iter_mut().zip(lift_local(self.n, q, &neg)) {
                *xi = (*xi + li) % self.n;
            }
        }
        Some(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn apply(n: u32, columns: &[Vec<i64>], x: &[u32]) -> Vec<u32> {
        let rows = columns.first().map_or(0, Vec::len);
        (0..rows)
            .map(|r| {
                let s: i64 = columns.iter().zip(x).map(|(c, &xi)| c[r] * i64::from(xi)).sum();
                s.rem_euclid(i64::from(n)) as u32
            })
            .collect()
    }

    fn all_vectors(n: u32, len: usize) -> Vec<Vec<u32>> {
        let total = (n as usize).pow(len as u32);
        (0..total)
            .map(|mut idx| {
                (0..len)
                    .map(|_| {
                        let v = (idx % n as usize) as u32;
                        idx /= n as usize;
                        v
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn factorization() {
        assert_eq!(prime_powers(1), vec![]);
        assert_eq!(prime_powers(8), vec![(2, 3)]);
        assert_eq!(prime_powers(6), vec![(2, 1), (3, 1)]);
        assert_eq!(prime_powers(7), vec![(7, 1)]);
    }

    #[test]
    fn span_of_two_in_z4() {
        let m = Submodule::span(4, 2, &[vec![2, 0]]);
        assert_eq!(m.order(), 2);
        assert!(m.contains(&[2, 0]));
        assert!(!m.contains(&[1, 0]));
        assert_eq!(m.reduce(&[3, 1]), vec![1, 1]);
    }

    #[test]
    fn saturation_needed() {
        // Over Z/4, span{(2, 1)} contains (0, 2); naive echelon form misses it.
        let m = Submodule::span(4, 2, &[vec![2, 1]]);
        assert_eq!(m.order(), 4);
        assert!(m.contains(&[0, 2]));
        assert_eq!(m.reduce(&[0, 2]), vec![0, 0]);
    }

    proptest! {
        #[test]
        fn linear_map_matches_brute_force(
            n in prop::sample::select(vec![2u32, 3, 4, 6, 8]),
            rows in 1usize..4,
            cols in 1usize..4,
            seed in prop::collection::vec(-9i64..9, 16),
        ) {
            let columns: Vec<Vec<i64>> = (0..cols)
                .map(|j| (0..rows).map(|r| seed[j * 4 + r]).collect())
                .collect();
            let map = LinearMap::from_columns(n, rows, &columns);
            let xs = all_vectors(n, cols);
            let images: std::collections::BTreeSet<Vec<u32>> =
                xs.iter().map(|x| apply(n, &columns, x)).collect();
            let kernel: Vec<&Vec<u32>> =
                xs.iter().filter(|x| apply(n, &columns, x).iter().all(|&v| v == 0)).collect();

            prop_assert_eq!(map.image().order(), images.len() as u128);
            prop_assert_eq!(map.kernel().order(), kernel.len() as u128);
            for x in &kernel {
                prop_assert!(map.kernel().contains(x));
            }
            for b in all_vectors(n, rows) {
                match map.solve(&b) {
                    Some(x) => prop_assert_eq!(apply(n, &columns, &x), b),
                    None => prop_assert!(!images.contains(&b)),
                }
            }
            // canonical reduction is constant on cosets of the image
            let image = map.image();
            let reps: std::collections::BTreeSet<Vec<u32>> =
                all_vectors(n, rows).iter().map(|b| image.reduce(b)).collect();
            prop_assert_eq!(reps.len() as u128 * image.order(), (n as u128).pow(rows as u32));
        }
    }
}
