//! Root systems, half-sums of positive roots and Spin lifts of adjoint
//! representations.
//!
//! Roots are written in simple-root coordinates and lattices in
//! fundamental-weight coordinates. The Cartan matrix entry `(i, j)` is
//! `<α_i, α_j^∨>`, so row `i` is `α_i` in weight coordinates. Simple roots are
//! numbered as in Bourbaki.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

pub type Q = Ratio<i64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RootType {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSystem {
    pub kind: RootType,
    pub rank: usize,
    pub cartan: Vec<Vec<i64>>,
    /// Positive roots by height, then lexicographically.
    pub positive_roots: Vec<Vec<i64>>,
}

impl fmt::Display for RootSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.kind, self.rank)
    }
}

fn cartan_matrix(kind: RootType, n: usize) -> Result<Vec<Vec<i64>>> {
    let ok = match kind {
        RootType::A => n >= 1,
        RootType::B | RootType::C => n >= 2,
        RootType::D => n >= 3,
        RootType::E => (6..=8).contains(&n),
        RootType::F => n == 4,
        RootType::G => n == 2,
    };
    if !ok {
        return Err(Error::Invalid(format!("no root system {kind:?}{n}")));
    }
    let mut c = vec![vec![0i64; n]; n];
    let mut link = |i: usize, j: usize, cij: i64, cji: i64| {
        c[i][j] = cij;
        c[j][i] = cji;
    };
    match kind {
        RootType::A | RootType::B | RootType::C => {
            for i in 0..n - 1 {
                link(i, i + 1, -1, -1);
            }
            // α_n short in B, long in C
            match kind {
                RootType::B => link(n - 2, n - 1, -2, -1),
                RootType::C => link(n - 2, n - 1, -1, -2),
                _ => {}
            }
        }
        RootType::D => {
            for i in 0..n - 2 {
                link(i, i + 1, -1, -1);
            }
            link(n - 3, n - 1, -1, -1);
        }
        RootType::E => {
            link(0, 2, -1, -1);
            link(1, 3, -1, -1);
            for i in 2..n - 1 {
                link(i, i + 1, -1, -1);
            }
        }
        RootType::F => {
            link(0, 1, -1, -1);
            link(1, 2, -2, -1);
            link(2, 3, -1, -1);
        }
        RootType::G => link(0, 1, -1, -3),
    }
    for (i, row) in c.iter_mut().enumerate() {
        row[i] = 2;
    }
    Ok(c)
}

/// `<β, α_i^∨>` for `β` in simple-root coordinates.
fn pairing(cartan: &[Vec<i64>], beta: &[i64], i: usize) -> i64 {
    beta.iter()
        .enumerate()
        .map(|(j, &b)| b * cartan[j][i])
        .sum()
}

impl RootSystem {
    pub fn new(kind: RootType, rank: usize) -> Result<RootSystem> {
        let cartan = cartan_matrix(kind, rank)?;
        let positive_roots = generate_positive_roots(&cartan);
        Ok(RootSystem {
            kind,
            rank,
            cartan,
            positive_roots,
        })
    }

    /// The classical number of positive roots for the type.
    pub fn expected_root_count(kind: RootType, n: usize) -> usize {
        match kind {
            RootType::A => n * (n + 1) / 2,
            RootType::B | RootType::C => n * n,
            RootType::D => n * (n - 1),
            RootType::E => [36, 63, 120][n - 6],
            RootType::F => 24,
            RootType::G => 6,
        }
    }

    /// `ρ`, half the sum of the positive roots, in simple-root coordinates.
    pub fn half_sum(&self) -> Vec<Q> {
        (0..self.rank)
            .map(|i| Q::new(self.positive_roots.iter().map(|r| r[i]).sum::<i64>(), 2))
            .collect()
    }

    /// Simple-root coordinates to weight coordinates.
    pub fn to_weight_coords(&self, v: &[Q]) -> Vec<Q> {
        (0..self.rank)
            .map(|j| (0..self.rank).map(|i| v[i] * self.cartan[i][j]).sum())
            .collect()
    }

    pub fn cartan_determinant(&self) -> i64 {
        determinant(&self.cartan)
    }
}

impl FromStr for RootSystem {
    type Err = Error;

    /// `A3`, `B2`, `E7`, `G2`, ...
    fn from_str(s: &str) -> Result<RootSystem> {
        let s = s.trim();
        let mut chars = s.chars();
        let kind = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => RootType::A,
            Some('B') => RootType::B,
            Some('C') => RootType::C,
            Some('D') => RootType::D,
            Some('E') => RootType::E,
            Some('F') => RootType::F,
            Some('G') => RootType::G,
            _ => return Err(Error::Invalid(format!("unknown root system `{s}`"))),
        };
        let rank = chars
            .as_str()
            .parse()
            .map_err(|_| Error::Invalid(format!("unknown root system `{s}`")))?;
        RootSystem::new(kind, rank)
    }
}

/// Close the simple roots under root strings: `β + α_i` is a root exactly
/// when `q > 0` in the `α_i`-string `β - pα_i, …, β + qα_i`, with
/// `p - q = <β, α_i^∨>`.
fn generate_positive_roots(cartan: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = cartan.len();
    let mut roots: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect();
    let mut known: std::collections::HashSet<Vec<i64>> = roots.iter().cloned().collect();
    let mut layer = roots.clone();
    while !layer.is_empty() {
        let mut next = Vec::new();
        for beta in &layer {
            for i in 0..n {
                let mut p = 0;
                let mut down = beta.clone();
                loop {
                    down[i] -= 1;
                    if !known.contains(&down) {
                        break;
                    }
                    p += 1;
                }
                let q = p - pairing(cartan, beta, i);
                if q > 0 {
                    let mut up = beta.clone();
                    up[i] += 1;
                    if known.insert(up.clone()) {
                        next.push(up);
                    }
                }
            }
        }
        next.sort();
        roots.extend(next.iter().cloned());
        layer = next;
    }
    roots
}

/// Exact determinant by fraction-free elimination.
pub fn determinant(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    let mut a: Vec<Vec<i64>> = m.to_vec();
    let mut sign = 1;
    let mut prev = 1;
    for k in 0..n {
        if a[k][k] == 0 {
            let Some(r) = (k + 1..n).find(|&r| a[r][k] != 0) else {
                return 0;
            };
            a.swap(k, r);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    if n == 0 {
        1
    } else {
        sign * a[n - 1][n - 1]
    }
}

/// Solve `x · basis = v` exactly; `basis` must be square and invertible.
fn solve_rows(basis: &[Vec<i64>], v: &[Q]) -> Option<Vec<Q>> {
    let n = basis.len();
    // columns of the transpose system: basis^T x = v
    let mut a: Vec<Vec<Q>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| Q::from(basis[j][i]))
                .chain(std::iter::once(v[i]))
                .collect()
        })
        .collect();
    for k in 0..n {
        let r = (k..n).find(|&r| !a[r][k].is_zero())?;
        a.swap(k, r);
        let piv = a[k][k];
        for x in a[k].iter_mut() {
            *x /= piv;
        }
        for i in 0..n {
            if i != k && !a[i][k].is_zero() {
                let f = a[i][k];
                let row_k = a[k].clone();
                for (x, y) in a[i].iter_mut().zip(row_k) {
                    *x -= f * y;
                }
            }
        }
    }
    Some(a.iter().map(|r| r[n]).collect())
}

/// Row-style Hermite basis of the integer span of `gens`.
fn lattice_basis(gens: &[Vec<i64>], n: usize) -> Vec<Vec<i64>> {
    let mut rows: Vec<Vec<i64>> = gens.to_vec();
    let mut out = Vec::new();
    for col in 0..n {
        loop {
            rows.retain(|r| r.iter().any(|&x| x != 0));
            let nz: Vec<usize> = (0..rows.len()).filter(|&i| rows[i][col] != 0).collect();
            if nz.len() <= 1 {
                break;
            }
            let p = *nz.iter().min_by_key(|&&i| rows[i][col].abs()).unwrap();
            let pr = rows[p].clone();
            for &i in &nz {
                if i != p {
                    let f = rows[i][col] / pr[col];
                    for (x, y) in rows[i].iter_mut().zip(&pr) {
                        *x -= f * y;
                    }
                }
            }
        }
        if let Some(i) = rows.iter().position(|r| r[col] != 0) {
            let mut r = rows.remove(i);
            if r[col] < 0 {
                r.iter_mut().for_each(|x| *x = -*x);
            }
            out.push(r);
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormLabel {
    SimplyConnected,
    Adjoint,
    Custom,
}

/// A compact form, given by its character lattice `Λ_rt ⊆ Λ ⊆ Λ_wt`.
#[derive(Clone, Debug)]
pub struct GroupForm {
    pub root_system: RootSystem,
    pub label: FormLabel,
    /// Generators of the lattice in weight coordinates.
    pub lattice: Vec<Vec<i64>>,
}

impl GroupForm {
    pub fn simply_connected(rs: RootSystem) -> GroupForm {
        let n = rs.rank;
        let lattice = (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect();
        GroupForm {
            root_system: rs,
            label: FormLabel::SimplyConnected,
            lattice,
        }
    }

    pub fn adjoint(rs: RootSystem) -> GroupForm {
        let lattice = rs.cartan.clone();
        GroupForm {
            root_system: rs,
            label: FormLabel::Adjoint,
            lattice,
        }
    }

    /// The root lattice together with extra weights.
    pub fn custom(rs: RootSystem, extra: &[Vec<i64>]) -> Result<GroupForm> {
        if extra.iter().any(|v| v.len() != rs.rank) {
            return Err(Error::DimensionMismatch(format!(
                "weights for {rs} need {} coordinates",
                rs.rank
            )));
        }
        let mut lattice = rs.cartan.clone();
        lattice.extend(extra.iter().cloned());
        Ok(GroupForm {
            root_system: rs,
            label: FormLabel::Custom,
            lattice,
        })
    }

    /// `|Λ_wt : Λ|`.
    pub fn index_in_weight_lattice(&self) -> i64 {
        determinant(&lattice_basis(&self.lattice, self.root_system.rank)).abs()
    }

    fn lattice_name(&self) -> &'static str {
        match self.label {
            FormLabel::SimplyConnected => "weight lattice",
            FormLabel::Adjoint => "root lattice",
            FormLabel::Custom => "character lattice",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpinCertificate {
    /// Integral coordinates of `ρ` in the lattice basis.
    Coordinates(Vec<i64>),
    /// A coordinate (1-based index, value) that is not an integer.
    NonIntegral(usize, Q),
}

#[derive(Clone, Debug)]
pub struct SpinReport {
    pub group: String,
    /// `ρ` in simple-root coordinates.
    pub rho: Vec<Q>,
    pub in_lattice: bool,
    pub certificate: SpinCertificate,
    pub lattice_name: String,
    /// `a` for simple roots, `e` for torus coordinates.
    pub basis_symbol: &'static str,
}

impl SpinReport {
    /// Re-derive the verdict from the certificate.
    pub fn certificate_consistent(&self) -> bool {
        match &self.certificate {
            SpinCertificate::Coordinates(_) => self.in_lattice,
            SpinCertificate::NonIntegral(_, q) => !self.in_lattice && !q.is_integer(),
        }
    }

    /// `rho = 5*a1 + 3*a2`, in the basis named by `basis_symbol`.
    pub fn rho_text(&self) -> String {
        let mut out = String::new();
        for (i, c) in self.rho.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            let mag = c.abs();
            let coeff = if mag == Q::from(1) {
                String::new()
            } else {
                format!("{mag}*")
            };
            let sign = match (out.is_empty(), *c < Q::from(0)) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            };
            out.push_str(&format!("{sign}{coeff}{}{}", self.basis_symbol, i + 1));
        }
        if out.is_empty() {
            "0".into()
        } else {
            out
        }
    }

    pub fn verdict(&self) -> String {
        match &self.certificate {
            SpinCertificate::Coordinates(_) => {
                format!("SPIN: rho = {} in {}", self.rho_text(), self.lattice_name)
            }
            SpinCertificate::NonIntegral(i, q) => format!(
                "NO SPIN: rho = {} not in {} (coordinate {i} is {q})",
                self.rho_text(),
                self.lattice_name
            ),
        }
    }
}

fn certify(coords: &[Q]) -> (bool, SpinCertificate) {
    match coords.iter().position(|c| !c.is_integer()) {
        Some(i) => (false, SpinCertificate::NonIntegral(i + 1, coords[i])),
        None => (
            true,
            SpinCertificate::Coordinates(coords.iter().map(|c| c.to_integer()).collect()),
        ),
    }
}

/// Does the adjoint representation of `form` lift to Spin, i.e. is `ρ` in
/// its character lattice?
pub fn adjoint_spin(form: &GroupForm) -> SpinReport {
    let rs = &form.root_system;
    let rho = rs.half_sum();
    let rho_w = rs.to_weight_coords(&rho);
    let coords = match form.label {
        FormLabel::SimplyConnected => rho_w,
        FormLabel::Adjoint => rho.clone(),
        FormLabel::Custom => {
            let basis = lattice_basis(&form.lattice, rs.rank);
            solve_rows(&basis, &rho_w).expect("a lattice containing the roots has full rank")
        }
    };
    let (in_lattice, certificate) = certify(&coords);
    let group = match form.label {
        FormLabel::SimplyConnected => format!("{rs} simply connected"),
        FormLabel::Adjoint => format!("{rs} adjoint"),
        FormLabel::Custom => format!("{rs} custom"),
    };
    SpinReport {
        group,
        rho,
        in_lattice,
        certificate,
        lattice_name: form.lattice_name().into(),
        basis_symbol: "a",
    }
}

/// Weight coefficients of `Σ_{r<s} (ω_r - ω_s)` for `U(n)`, `ω_k` the k-th
/// coordinate character of the diagonal torus.
pub fn u_n_weight_sum(n: usize) -> Vec<i64> {
    let n = n as i64;
    (1..=n)
        .map(|r| if r < n { n - 2 * r + 1 } else { -(n - 1) })
        .collect()
}

/// The adjoint representation of `U(n)` lifts to Spin exactly when the
/// weight sum above is divisible by 2.
pub fn u_n_adjoint_spin(n: usize) -> Result<SpinReport> {
    if n == 0 {
        return Err(Error::Invalid("U(n) needs n >= 1".into()));
    }
    let half: Vec<Q> = u_n_weight_sum(n)
        .into_iter()
        .map(|c| Q::new(c, 2))
        .collect();
    let (in_lattice, certificate) = certify(&half);
    Ok(SpinReport {
        group: format!("U({n})"),
        rho: half,
        in_lattice,
        certificate,
        lattice_name: "torus weight lattice".into(),
        basis_symbol: "e",
    })
}

/// `2ρ ≡ Σ k α_k (mod 2)` in simple-root coordinates for `B_n`.
pub fn b_n_parity_holds(n: usize) -> Result<bool> {
    let rs = RootSystem::new(RootType::B, n)?;
    let two_rho: Vec<i64> = (0..n)
        .map(|i| rs.positive_roots.iter().map(|r| r[i]).sum())
        .collect();
    Ok(two_rho
        .iter()
        .enumerate()
        .all(|(k, c)| (c - (k as i64 + 1)).rem_euclid(2) == 0))
}

/// Every rational coordinate is an integer or a half-integer.
pub fn is_half_integral(v: &[Q]) -> bool {
    v.iter().all(|q| (*q * Q::from(2)).is_integer())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g2_roots_match_the_picture() {
        let rs = RootSystem::new(RootType::G, 2).unwrap();
        let mut want = vec![
            vec![1, 0],
            vec![0, 1],
            vec![1, 1],
            vec![2, 1],
            vec![3, 1],
            vec![3, 2],
        ];
        let mut got = rs.positive_roots.clone();
        want.sort();
        got.sort();
        assert_eq!(got, want);
        assert_eq!(rs.half_sum(), vec![Q::from(5), Q::from(3)]);
    }

    #[test]
    fn root_counts() {
        for (k, r) in [
            (RootType::A, 2),
            (RootType::E, 8),
            (RootType::D, 5),
            (RootType::F, 4),
        ] {
            let rs = RootSystem::new(k, r).unwrap();
            assert_eq!(
                rs.positive_roots.len(),
                RootSystem::expected_root_count(k, r)
            );
        }
        let e8 = RootSystem::new(RootType::E, 8).unwrap();
        assert_eq!(e8.positive_roots.len(), (248 - 8) / 2);
    }

    #[test]
    fn hermite_basis_spans() {
        let b = lattice_basis(&[vec![2, 0], vec![0, 2], vec![1, 1]], 2);
        assert_eq!(determinant(&b).abs(), 2);
    }
}
