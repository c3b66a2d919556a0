mod common;

use common::laplace_det;
use stmod::rootspin::*;

fn q(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

fn ints(v: &[i64]) -> Vec<Q> {
    v.iter().map(|&x| Q::from(x)).collect()
}

fn all_types() -> Vec<(RootType, usize)> {
    let mut v = Vec::new();
    for n in 1..=8 {
        v.push((RootType::A, n));
    }
    for n in 2..=8 {
        v.push((RootType::B, n));
        v.push((RootType::C, n));
    }
    for n in 3..=8 {
        v.push((RootType::D, n));
    }
    v.extend([
        (RootType::E, 6),
        (RootType::E, 7),
        (RootType::E, 8),
        (RootType::F, 4),
        (RootType::G, 2),
    ]);
    v
}

#[test]
fn counts_and_half_sums() {
    for (k, n) in all_types() {
        let rs = RootSystem::new(k, n).unwrap();
        assert!(rs.cartan.iter().enumerate().all(|(i, r)| r[i] == 2));
        assert_eq!(
            rs.positive_roots.len(),
            RootSystem::expected_root_count(k, n),
            "{rs}"
        );
        let rho = rs.half_sum();
        let summed: Vec<i64> = (0..n)
            .map(|i| rs.positive_roots.iter().map(|r| r[i]).sum())
            .collect();
        assert_eq!(
            rho.iter().map(|c| *c * Q::from(2)).collect::<Vec<_>>(),
            ints(&summed)
        );
        // ρ pairs to 1 with every simple coroot
        assert_eq!(rs.to_weight_coords(&rho), vec![Q::from(1); n], "{rs}");
    }
}

#[test]
fn a2_roots() {
    let rs: RootSystem = "A2".parse().unwrap();
    assert_eq!(rs.positive_roots, vec![vec![1, 0], vec![0, 1], vec![1, 1]]);
}

#[test]
fn exceptional_half_sums() {
    let rho = |s: &str| s.parse::<RootSystem>().unwrap().half_sum();
    assert_eq!(rho("G2"), ints(&[5, 3]));
    assert_eq!(rho("F4"), ints(&[8, 15, 21, 11]));
    assert_eq!(rho("E6"), ints(&[8, 11, 15, 21, 15, 8]));
    assert_eq!(
        rho("E7"),
        vec![
            q(17, 1),
            q(49, 2),
            q(33, 1),
            q(48, 1),
            q(75, 2),
            q(26, 1),
            q(27, 2)
        ]
    );
    assert_eq!(rho("E8"), ints(&[46, 68, 91, 135, 110, 84, 57, 29]));
}

#[test]
fn determinants_against_cofactor_expansion() {
    for (k, n) in all_types() {
        let rs = RootSystem::new(k, n).unwrap();
        let d = rs.cartan_determinant();
        assert_eq!(d, laplace_det(&rs.cartan), "{rs}");
        let want = match k {
            RootType::A => n as i64 + 1,
            RootType::B | RootType::C => 2,
            RootType::D => 4,
            RootType::E => [3, 2, 1][n - 6],
            RootType::F | RootType::G => 1,
        };
        assert_eq!(d, want, "{rs}");
        assert_eq!(GroupForm::adjoint(rs.clone()).index_in_weight_lattice(), d);
    }
}

#[test]
fn adjoint_verdicts() {
    let adj = |s: &str| adjoint_spin(&GroupForm::adjoint(s.parse().unwrap()));
    let g2 = adj("G2");
    assert!(g2.in_lattice);
    assert_eq!(g2.verdict(), "SPIN: rho = 5*a1 + 3*a2 in root lattice");
    assert!(adj("F4").in_lattice);
    assert!(adj("E6").in_lattice);
    assert!(adj("E8").in_lattice);
    let e7 = adj("E7");
    assert!(!e7.in_lattice);
    assert_eq!(e7.certificate, SpinCertificate::NonIntegral(2, q(49, 2)));
    for n in 1..=8 {
        assert_eq!(adj(&format!("A{n}")).in_lattice, n % 2 == 0, "A{n}");
    }
    for n in 2..=8 {
        assert!(!adj(&format!("B{n}")).in_lattice, "B{n}");
        assert!(b_n_parity_holds(n).unwrap(), "B{n} parity");
    }
    for (k, n) in all_types() {
        let r = adjoint_spin(&GroupForm::adjoint(RootSystem::new(k, n).unwrap()));
        assert!(r.certificate_consistent());
        assert_eq!(r.in_lattice, r.rho.iter().all(|c| c.is_integer()));
        let sc = adjoint_spin(&GroupForm::simply_connected(RootSystem::new(k, n).unwrap()));
        assert!(sc.in_lattice && sc.certificate_consistent());
    }
}

#[test]
fn intermediate_forms() {
    // SO(2n): the root lattice plus the vector weight ω_1.
    for n in 3..=8 {
        let rs = RootSystem::new(RootType::D, n).unwrap();
        let mut w1 = vec![0; n];
        w1[0] = 1;
        let so = GroupForm::custom(rs.clone(), &[w1]).unwrap();
        assert_eq!(so.index_in_weight_lattice(), 2);
        let r = adjoint_spin(&so);
        assert!(r.certificate_consistent());
        // 2ω_1 is a root-lattice vector, so the lattice is Λ_rt ∪ (ω_1 + Λ_rt).
        let in_root = rs.half_sum().iter().all(|c| c.is_integer());
        let mut shifted = rs.to_weight_coords(&rs.half_sum());
        shifted[0] -= Q::from(1);
        let inv = invert_cartan(&rs.cartan);
        let in_root_shifted = (0..n).all(|j| {
            (0..n)
                .map(|i| shifted[i] * inv[i][j])
                .sum::<Q>()
                .is_integer()
        });
        assert_eq!(r.in_lattice, in_root || in_root_shifted, "D{n}");
    }
}

/// Rational inverse by cofactors, as an independent route.
fn invert_cartan(c: &[Vec<i64>]) -> Vec<Vec<Q>> {
    let n = c.len();
    let det = laplace_det(c);
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let minor: Vec<Vec<i64>> = (0..n)
                        .filter(|&r| r != j)
                        .map(|r| (0..n).filter(|&s| s != i).map(|s| c[r][s]).collect())
                        .collect();
                    let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
                    Q::new(sign * laplace_det(&minor), det)
                })
                .collect()
        })
        .collect()
}

#[test]
fn unitary_groups() {
    for n in 1..=9 {
        // direct sum over pairs r < s of e_r - e_s
        let mut direct = vec![0i64; n];
        for r in 0..n {
            for s in r + 1..n {
                direct[r] += 1;
                direct[s] -= 1;
            }
        }
        assert_eq!(u_n_weight_sum(n), direct);
        let rep = u_n_adjoint_spin(n).unwrap();
        assert_eq!(rep.in_lattice, n % 2 == 1, "U({n})");
        assert!(rep.certificate_consistent());
    }
    assert!(u_n_adjoint_spin(0).is_err());
}
