//! Brute-force oracles shared by the integration tests.
#![allow(dead_code)]

pub mod props;

use std::collections::BTreeMap;

use stmod::f2linalg::{F2Matrix, F2Vector};
use stmod::fpmod::{hom_basis, GradedModule};
use stmod::resolve::{ExtChart, MinimalResolution};

fn flatten(f: &BTreeMap<i32, F2Matrix>) -> Vec<bool> {
    let mut bits = Vec::new();
    for m in f.values() {
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                bits.push(m.get(i, j));
            }
        }
    }
    bits
}

fn rank_of(vs: &[Vec<bool>]) -> usize {
    let Some(len) = vs.first().map(|v| v.len()) else {
        return 0;
    };
    let rows: Vec<F2Vector> = vs.iter().map(|v| F2Vector::from_bits(v)).collect();
    F2Matrix::from_rows(len, &rows).rank()
}

/// `Ext^{s,t}(M, n)` as cohomology of `Hom(F_s, n[t])`, with each Hom space
/// found by solving the intertwining equations directly rather than from
/// generator data. `res` must be complete through `t_max + top(n)`.
pub fn hom_complex_ext(
    res: &MinimalResolution,
    n: &GradedModule,
    s_max: usize,
    t_lo: i32,
    t_max: i32,
) -> ExtChart {
    let mut c = ExtChart::new(s_max, t_max);
    for t in t_lo..=t_max {
        let nt = n.suspend(t);
        let homs: Vec<Vec<BTreeMap<i32, F2Matrix>>> = (0..=s_max + 1)
            .map(|s| hom_basis(&res.stages[s].module, &nt))
            .collect();
        let mut prev_rank = 0;
        for s in 0..=s_max {
            let d = &res.stages[s + 1].differential;
            let images: Vec<Vec<bool>> = homs[s]
                .iter()
                .map(|f| {
                    let g: BTreeMap<i32, F2Matrix> = res.stages[s + 1]
                        .module
                        .degrees()
                        .into_iter()
                        .filter(|u| nt.dim(*u) > 0)
                        .map(|u| {
                            let fu = f.get(&u).cloned().unwrap_or_else(|| {
                                F2Matrix::zeros(nt.dim(u), res.stages[s].module.dim(u))
                            });
                            (u, fu.mul(&d.matrix(u)))
                        })
                        .collect();
                    flatten(&g)
                })
                .collect();
            let rank = rank_of(&images);
            let n = homs[s].len() - rank - prev_rank;
            if n > 0 {
                c.entries.insert((s, t), n);
            }
            prev_rank = rank;
        }
    }
    c
}

/// Exact determinant by cofactor expansion along the first row.
pub fn laplace_det(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<i64>> = m[1..]
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|(k, _)| *k != j)
                        .map(|(_, x)| *x)
                        .collect()
                })
                .collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * m[0][j] * laplace_det(&minor)
        })
        .sum()
}
