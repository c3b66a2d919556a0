use std::collections::BTreeMap;
use std::sync::Arc;

use super::map::ModuleMap;
use super::module::GradedModule;
use crate::error::Result;
use crate::f2linalg::{F2Matrix, F2Vector};

/// `m` split as free summands plus a part with no free summand.
#[derive(Clone, Debug)]
pub struct Decomposition {
    /// Degrees of the generators of the free summands, in the order found.
    pub free_part: Vec<i32>,
    pub reduced: GradedModule,
    /// Isomorphism from `⊕ alg[d] ⊕ reduced` (in that order) onto `m`.
    pub witness: ModuleMap,
}

/// Split off free summands one at a time. Each is generated by the first
/// basis vector of lowest degree that the integral does not annihilate, and
/// is split by the retraction built from the Frobenius pairing.
pub fn reduce(m: &GradedModule) -> Result<Decomposition> {
    let alg = m.algebra().clone();
    let lambda = alg.integral()?;
    let top = alg.top_degree() as i32;
    let reg = GradedModule::regular(&alg);

    // pairing[e]: rows a' in degree top-e, cols c in degree e, entry lambda(a' c)
    let pairing: BTreeMap<i32, F2Matrix> = (0..=top)
        .map(|e| {
            let rows: Vec<F2Vector> = alg
                .in_degree((top - e) as u32)
                .iter()
                .map(|&a| reg.action(a, e).row(0))
                .collect();
            (e, F2Matrix::from_rows(alg.dim_in(e as u32), &rows))
        })
        .collect();

    let mut cur = m.clone();
    // columns: current basis vectors expressed in m
    let mut incl: BTreeMap<i32, F2Matrix> = m
        .degrees()
        .into_iter()
        .map(|d| (d, F2Matrix::identity(m.dim(d))))
        .collect();
    let mut free_part = Vec::new();
    let mut free_incl: Vec<BTreeMap<i32, F2Matrix>> = Vec::new();

    loop {
        let found = cur.degrees().into_iter().find_map(|d| {
            let act = cur.action(lambda, d);
            (0..cur.dim(d))
                .find(|&i| !act.column(i).is_zero())
                .map(|i| (d, i, act.column(i)))
        });
        let Some((d, i, lx)) = found else { break };
        let phi = lx.first_one().unwrap();
        let x = F2Vector::unit(cur.dim(d), i);

        // inclusion of alg[d] into m: a -> a x
        let mut fi = BTreeMap::new();
        for e in 0..=top {
            if alg.dim_in(e as u32) == 0 {
                continue;
            }
            let cols: Vec<F2Vector> = alg
                .in_degree(e as u32)
                .iter()
                .map(|&a| incl[&(d + e)].mul_vec(&cur.action(a, d).mul_vec(&x)))
                .collect();
            fi.insert(d + e, F2Matrix::from_columns(m.dim(d + e), &cols));
        }
        free_incl.push(fi);
        free_part.push(d);

        // retraction r: cur^e -> alg^{e-d}; kernel is the complement
        let mut kernel: BTreeMap<i32, Vec<F2Vector>> = BTreeMap::new();
        for e in cur.degrees() {
            let rel = e - d;
            if !(0..=top).contains(&rel) {
                kernel.insert(
                    e,
                    (0..cur.dim(e))
                        .map(|j| F2Vector::unit(cur.dim(e), j))
                        .collect(),
                );
                continue;
            }
            let p = &pairing[&rel];
            // f[a'][j] = phi(a' * e_j)
            let mut f = F2Matrix::zeros(p.rows(), cur.dim(e));
            for (r, &a) in alg.in_degree((top - rel) as u32).iter().enumerate() {
                let act = cur.action(a, e);
                for j in 0..cur.dim(e) {
                    if act.get(phi, j) {
                        f.set(r, j, true);
                    }
                }
            }
            let retraction = super::map::invert(p).mul(&f);
            kernel.insert(e, retraction.kernel_basis());
        }
        kernel.retain(|_, v| !v.is_empty());
        let (next, sub_incl) = cur.submodule(&kernel, cur.name().to_string())?;
        incl = sub_incl
            .into_iter()
            .map(|(e, s)| (e, incl[&e].mul(&s)))
            .collect();
        cur = next;
    }

    let reduced = cur.with_name(format!("{}_red", m.name()));
    let frees: Vec<GradedModule> = free_part.iter().map(|&d| reg.suspend(d)).collect();
    let mut parts: Vec<&GradedModule> = frees.iter().collect();
    parts.push(&reduced);
    let sum = Arc::new(GradedModule::direct_sum(
        format!("{}_split", m.name()),
        &alg,
        &parts,
    )?);
    let mut mats = BTreeMap::new();
    for e in sum.degrees() {
        let mut cols: Vec<F2Vector> = Vec::new();
        for fi in &free_incl {
            if let Some(mat) = fi.get(&e) {
                cols.extend(mat.columns());
            }
        }
        if let Some(mat) = incl.get(&e) {
            cols.extend(mat.columns());
        }
        mats.insert(e, F2Matrix::from_columns(m.dim(e), &cols));
    }
    let witness = ModuleMap::new(sum, Arc::new(m.clone()), 0, mats)?;
    debug_assert!(witness.is_bijective());
    Ok(Decomposition {
        free_part,
        reduced,
        witness,
    })
}
