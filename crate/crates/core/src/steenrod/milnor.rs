//! Milnor basis elements and the product, coproduct and antipode on them.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;

/// `Sq(r_1, ..., r_l)` with trailing zeros trimmed; the empty tuple is the unit.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MilnorBasisElt(Vec<u32>);

impl MilnorBasisElt {
    pub fn new(mut exps: Vec<u32>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        MilnorBasisElt(exps)
    }

    pub fn unit() -> Self {
        MilnorBasisElt(Vec::new())
    }

    /// `Sq^k = Sq(k)`.
    pub fn sq(k: u32) -> Self {
        Self::new(vec![k])
    }

    /// `Sq(0,...,0,1)` with the 1 in place `s+1`: the primitive dual to xi_{s+1}.
    pub fn q(s: usize) -> Self {
        let mut e = vec![0; s + 1];
        e[s] = 1;
        MilnorBasisElt(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &r)| r * ((1u32 << (i + 1)) - 1))
            .sum()
    }

    /// Whether the exponents fit the profile of A(n): r_i < 2^{n+2-i}.
    pub fn in_profile(&self, n: u32) -> bool {
        let n = n as usize;
        self.0.len() <= n + 1
            && self
                .0
                .iter()
                .enumerate()
                .all(|(i, &r)| (r as u64) < 1u64 << (n + 1 - i))
    }
}

impl Ord for MilnorBasisElt {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MilnorBasisElt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MilnorBasisElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(|r| r.to_string()).collect();
        write!(f, "Sq({})", parts.join(","))
    }
}

impl fmt::Debug for MilnorBasisElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub(crate) fn toggle(set: &mut BTreeSet<MilnorBasisElt>, e: MilnorBasisElt) {
    if !set.remove(&e) {
        set.insert(e);
    }
}

struct ProductSearch<'a> {
    r: &'a [u32],
    s: &'a [u32],
    // x[i][j], i in 0..=|r|, j in 0..=|s|; x[0][0] unused.
    x: Vec<Vec<u32>>,
    col_left: Vec<u32>,
    out: BTreeSet<MilnorBasisElt>,
}

impl ProductSearch<'_> {
    fn cell(&mut self, i: usize, j: usize, row_left: u32) {
        let (rows, cols) = (self.r.len(), self.s.len());
        if i > rows {
            for jj in 1..=cols {
                self.x[0][jj] = self.col_left[jj];
            }
            self.finish();
            return;
        }
        if j > cols {
            self.x[i][0] = row_left;
            let next = if i < rows { self.r[i] } else { 0 };
            self.cell(i + 1, 1, next);
            return;
        }
        let max = self.col_left[j].min(row_left >> j);
        for v in 0..=max {
            self.x[i][j] = v;
            self.col_left[j] -= v;
            self.cell(i, j + 1, row_left - (v << j));
            self.col_left[j] += v;
        }
        self.x[i][j] = 0;
    }

    fn finish(&mut self) {
        let (rows, cols) = (self.r.len(), self.s.len());
        let mut t = Vec::with_capacity(rows + cols);
        for n in 1..=rows + cols {
            let mut acc = 0u32;
            for i in 0..=n.min(rows) {
                let j = n - i;
                if j > cols {
                    continue;
                }
                let v = self.x[i][j];
                // The multinomial coefficient is odd iff the binary digits are disjoint.
                if acc & v != 0 {
                    return;
                }
                acc |= v;
            }
            t.push(acc);
        }
        toggle(&mut self.out, MilnorBasisElt::new(t));
    }
}

/// Product of two Milnor basis elements in the full Steenrod algebra.
pub fn milnor_product(a: &MilnorBasisElt, b: &MilnorBasisElt) -> BTreeSet<MilnorBasisElt> {
    if a.is_unit() {
        return BTreeSet::from([b.clone()]);
    }
    if b.is_unit() {
        return BTreeSet::from([a.clone()]);
    }
    let (r, s) = (a.exponents(), b.exponents());
    let mut col_left = vec![0; s.len() + 1];
    col_left[1..].copy_from_slice(s);
    let mut search = ProductSearch {
        r,
        s,
        x: vec![vec![0; s.len() + 1]; r.len() + 1],
        col_left,
        out: BTreeSet::new(),
    };
    search.cell(1, 1, r[0]);
    search.out
}

/// All splittings `Sq(R') (x) Sq(R'')` with `R' + R'' = R`.
pub fn coproduct_basis(a: &MilnorBasisElt) -> Vec<(MilnorBasisElt, MilnorBasisElt)> {
    let r = a.exponents();
    let mut out = Vec::new();
    let mut left = vec![0u32; r.len()];
    loop {
        let right: Vec<u32> = r.iter().zip(&left).map(|(x, y)| x - y).collect();
        out.push((
            MilnorBasisElt::new(left.clone()),
            MilnorBasisElt::new(right),
        ));
        let mut i = 0;
        loop {
            if i == r.len() {
                return out;
            }
            if left[i] < r[i] {
                left[i] += 1;
                break;
            }
            left[i] = 0;
            i += 1;
        }
    }
}

/// Conjugation, from chi(x) = x + sum chi(x') x'' over the reduced coproduct.
pub fn antipode_basis(
    a: &MilnorBasisElt,
    memo: &mut HashMap<MilnorBasisElt, BTreeSet<MilnorBasisElt>>,
) -> BTreeSet<MilnorBasisElt> {
    if let Some(v) = memo.get(a) {
        return v.clone();
    }
    let mut out = BTreeSet::from([a.clone()]);
    for (l, r) in coproduct_basis(a) {
        if l.is_unit() || r.is_unit() {
            continue;
        }
        let chi_l = antipode_basis(&l, memo);
        for t in &chi_l {
            for p in milnor_product(t, &r) {
                toggle(&mut out, p);
            }
        }
    }
    memo.insert(a.clone(), out.clone());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> MilnorBasisElt {
        MilnorBasisElt::new(e.to_vec())
    }

    fn set(es: &[&[u32]]) -> BTreeSet<MilnorBasisElt> {
        es.iter().map(|e| m(e)).collect()
    }

    #[test]
    fn small_products() {
        assert!(milnor_product(&m(&[1]), &m(&[1])).is_empty());
        assert_eq!(milnor_product(&m(&[1]), &m(&[2])), set(&[&[3]]));
        assert_eq!(milnor_product(&m(&[2]), &m(&[1])), set(&[&[3], &[0, 1]]));
        assert_eq!(milnor_product(&m(&[2]), &m(&[2])), set(&[&[1, 1]]));
        assert_eq!(milnor_product(&m(&[0, 1]), &m(&[0, 1])), BTreeSet::new());
        assert_eq!(milnor_product(&m(&[]), &m(&[5, 1])), set(&[&[5, 1]]));
    }

    #[test]
    fn binomial_rule_for_first_exponents() {
        // Sq(a) Sq(b) has Sq(a+b) with coefficient binom(a+b, a).
        for a in 0..12u32 {
            for b in 0..12u32 {
                let p = milnor_product(&m(&[a]), &m(&[b]));
                let odd = (a + b) & a == a;
                assert_eq!(p.contains(&m(&[a + b])), odd, "a={a} b={b}");
            }
        }
    }

    #[test]
    fn coproduct_counts() {
        assert_eq!(coproduct_basis(&m(&[2])).len(), 3);
        assert_eq!(coproduct_basis(&m(&[3, 1])).len(), 8);
        assert_eq!(coproduct_basis(&m(&[])).len(), 1);
    }

    #[test]
    fn antipode_small() {
        let mut memo = HashMap::new();
        assert_eq!(antipode_basis(&m(&[1]), &mut memo), set(&[&[1]]));
        assert_eq!(antipode_basis(&m(&[2]), &mut memo), set(&[&[2]]));
        // chi(Sq^3) = Sq^2 Sq^1 = Sq(3) + Sq(0,1)
        assert_eq!(antipode_basis(&m(&[3]), &mut memo), set(&[&[3], &[0, 1]]));
        assert_eq!(antipode_basis(&m(&[0, 1]), &mut memo), set(&[&[0, 1]]));
    }
}
