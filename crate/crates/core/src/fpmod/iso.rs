use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::functors::dual;
use super::map::ModuleMap;
use super::margolis::{available_primitives, margolis_homology};
use super::module::GradedModule;
use super::reduce::reduce;
use crate::error::{Error, Result};
use crate::f2linalg::{F2Matrix, F2Vector};

/// Result of an isomorphism search.
#[derive(Clone, Debug)]
pub enum IsoOutcome {
    /// A verified degree-preserving isomorphism from the first module to the second.
    Isomorphic(ModuleMap),
    NotIsomorphic(String),
    /// No isomorphism found within the search budget.
    Indeterminate,
}

impl IsoOutcome {
    pub fn is_iso(&self) -> bool {
        matches!(self, IsoOutcome::Isomorphic(_))
    }

    pub fn is_not_iso(&self) -> bool {
        matches!(self, IsoOutcome::NotIsomorphic(_))
    }
}

/// Bound on `2^r` for exhaustive search over the space of induced maps on
/// indecomposables; beyond it random combinations are tried.
const EXHAUSTIVE_BITS: usize = 16;
const RANDOM_TRIES: usize = 20_000;
const SEED: u64 = 0x5eed;

/// Basis of the space of degree-0 module maps `m -> n`, each as per-degree
/// matrices.
pub fn hom_basis(m: &GradedModule, n: &GradedModule) -> Vec<BTreeMap<i32, F2Matrix>> {
    let alg = m.algebra();
    let degs: Vec<i32> = m.degrees().into_iter().filter(|&d| n.dim(d) > 0).collect();
    let mut offset = BTreeMap::new();
    let mut nvars = 0;
    for &d in &degs {
        offset.insert(d, nvars);
        nvars += m.dim(d) * n.dim(d);
    }
    // variable for entry (i, j) of f_d: offset[d] + i * dim m^d + j
    let var = |d: i32, i: usize, j: usize| offset[&d] + i * m.dim(d) + j;
    let mut rows: Vec<F2Vector> = Vec::new();
    for g in 0..alg.num_gens() {
        let k = alg.gen_degree(g) as i32;
        for d in m.degrees() {
            let (am, an) = (m.gen_action(g, d), n.gen_action(g, d));
            // (f_{d+k} am)[i][j] = sum_l f_{d+k}[i][l] am[l][j]
            // (an f_d)[i][j]    = sum_l an[i][l] f_d[l][j]
            for i in 0..n.dim(d + k) {
                for j in 0..m.dim(d) {
                    let mut row = F2Vector::zeros(nvars);
                    if offset.contains_key(&(d + k)) {
                        for l in 0..m.dim(d + k) {
                            if am.get(l, j) {
                                row.flip(var(d + k, i, l));
                            }
                        }
                    }
                    if offset.contains_key(&d) {
                        for l in 0..n.dim(d) {
                            if an.get(i, l) {
                                row.flip(var(d, l, j));
                            }
                        }
                    }
                    if !row.is_zero() {
                        rows.push(row);
                    }
                }
            }
        }
    }
    let system = F2Matrix::from_rows(nvars, &rows);
    system
        .kernel_basis()
        .into_iter()
        .map(|v| {
            degs.iter()
                .map(|&d| {
                    let mut f = F2Matrix::zeros(n.dim(d), m.dim(d));
                    for i in 0..n.dim(d) {
                        for j in 0..m.dim(d) {
                            f.set(i, j, v.get(var(d, i, j)));
                        }
                    }
                    (d, f)
                })
                .collect()
        })
        .collect()
}

fn free_ranks(m: &GradedModule) -> Option<Vec<i32>> {
    let mut f = reduce(m).ok()?.free_part;
    f.sort();
    Some(f)
}

/// Cheap invariants; the first difference found, if any.
pub fn invariant_difference(m: &GradedModule, n: &GradedModule) -> Result<Option<String>> {
    if m.dims() != n.dims() {
        return Ok(Some(format!(
            "dimensions differ: {:?} vs {:?}",
            m.dims(),
            n.dims()
        )));
    }
    for s in available_primitives(m) {
        let (a, b) = (margolis_homology(m, s)?, margolis_homology(n, s)?);
        if a != b {
            return Ok(Some(format!("P(1,{s}) homology differs: {a:?} vs {b:?}")));
        }
    }
    let (a, b) = (m.generator_dims(), n.generator_dims());
    if a != b {
        return Ok(Some(format!("generator degrees differ: {a:?} vs {b:?}")));
    }
    if m.algebra().integral().is_ok() {
        let (a, b) = (free_ranks(m), free_ranks(n));
        if a != b {
            return Ok(Some(format!("free summands differ: {a:?} vs {b:?}")));
        }
    }
    Ok(None)
}

/// Search for a degree-preserving isomorphism `m -> n`.
///
/// A map is an isomorphism exactly when it induces isomorphisms on
/// indecomposables `M / A⁺M` and dimensions agree, so the search runs over
/// the image of the Hom space in maps of indecomposables.
pub fn iso_test(m: &GradedModule, n: &GradedModule) -> Result<IsoOutcome> {
    if m.algebra() != n.algebra() {
        return Err(Error::Unsupported(format!(
            "modules over {} and {}",
            m.algebra(),
            n.algebra()
        )));
    }
    if let Some(why) = invariant_difference(m, n)? {
        return Ok(IsoOutcome::NotIsomorphic(why));
    }
    let (src, tgt) = (Arc::new(m.clone()), Arc::new(n.clone()));
    if m.is_zero() {
        return Ok(IsoOutcome::Isomorphic(ModuleMap::zero(&src, &tgt, 0)));
    }
    let homs = hom_basis(m, n);
    let (dm, dn) = (m.decomposables(), n.decomposables());
    let qdegs: Vec<i32> = m.generator_dims().into_keys().collect();
    // Induced map on indecomposables, flattened.
    let project = |f: &BTreeMap<i32, F2Matrix>| -> Vec<F2Matrix> {
        qdegs
            .iter()
            .map(|&d| {
                let (cm, cn) = (dm[&d].complement_positions(), dn[&d].complement_positions());
                let cols: Vec<F2Vector> = cm
                    .iter()
                    .map(|&p| {
                        let img = f
                            .get(&d)
                            .map_or_else(|| F2Vector::zeros(n.dim(d)), |fd| fd.column(p));
                        let r = dn[&d].reduce(&img).0;
                        F2Vector::from_indices(
                            cn.len(),
                            cn.iter()
                                .enumerate()
                                .filter(|(_, &q)| r.get(q))
                                .map(|(i, _)| i),
                        )
                    })
                    .collect();
                F2Matrix::from_columns(cn.len(), &cols)
            })
            .collect()
    };
    // Keep homs with independent projections.
    let mut chosen: Vec<(BTreeMap<i32, F2Matrix>, Vec<F2Matrix>)> = Vec::new();
    for f in &homs {
        chosen.push((f.clone(), project(f)));
    }
    let flat = |p: &[F2Matrix]| -> F2Vector {
        let mut bits = Vec::new();
        for b in p {
            for i in 0..b.rows() {
                for j in 0..b.cols() {
                    bits.push(b.get(i, j));
                }
            }
        }
        F2Vector::from_bits(&bits)
    };
    let total: usize = chosen.first().map_or(0, |c| flat(&c.1).len());
    let mut ech = crate::f2linalg::Echelon::new(total, chosen.len());
    chosen.retain(|c| ech.insert(&flat(&c.1)));
    let r = chosen.len();

    let combine_q = |mask: &dyn Fn(usize) -> bool| -> Vec<F2Matrix> {
        let mut acc: Vec<F2Matrix> = qdegs
            .iter()
            .map(|&d| {
                let k = dm[&d].complement_positions().len();
                F2Matrix::zeros(k, k)
            })
            .collect();
        for (i, c) in chosen.iter().enumerate() {
            if mask(i) {
                for (a, b) in acc.iter_mut().zip(&c.1) {
                    a.add_assign(b);
                }
            }
        }
        acc
    };
    let finish = |mask: &dyn Fn(usize) -> bool| -> Result<IsoOutcome> {
        let mut mats: BTreeMap<i32, F2Matrix> = BTreeMap::new();
        for (i, c) in chosen.iter().enumerate() {
            if mask(i) {
                for (d, f) in &c.0 {
                    mats.entry(*d)
                        .and_modify(|x| x.add_assign(f))
                        .or_insert_with(|| f.clone());
                }
            }
        }
        let map = ModuleMap::new(src.clone(), tgt.clone(), 0, mats)?;
        if !map.is_bijective() {
            return Err(Error::Invalid(
                "map with invertible indecomposable part is not bijective".into(),
            ));
        }
        Ok(IsoOutcome::Isomorphic(map))
    };
    let good = |q: &[F2Matrix]| q.iter().all(|b| b.is_invertible());

    if r <= EXHAUSTIVE_BITS {
        for bits in 1u64..(1u64 << r) {
            let mask = |i: usize| bits >> i & 1 == 1;
            if good(&combine_q(&mask)) {
                return finish(&mask);
            }
        }
        return Ok(IsoOutcome::NotIsomorphic(
            "no map induces an isomorphism on indecomposables".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for _ in 0..RANDOM_TRIES {
        let bits: Vec<bool> = (0..r).map(|_| rng.gen()).collect();
        let mask = |i: usize| bits[i];
        if good(&combine_q(&mask)) {
            return finish(&mask);
        }
    }
    Ok(IsoOutcome::Indeterminate)
}

/// The `d` with `D(m) ≅ m[-d]`. Only `d = lo + hi` can work, where `lo..=hi`
/// is the support of `m`. With `stable`, free summands are removed first; a
/// module that is entirely free has no shift.
pub fn selfdual_shift(m: &GradedModule, stable: bool) -> Result<Option<i32>> {
    let base = if stable {
        reduce(m)?.reduced
    } else {
        m.clone()
    };
    let (Some(lo), Some(hi)) = (base.min_degree(), base.max_degree()) else {
        return Ok(None);
    };
    let d = lo + hi;
    match iso_test(&dual(&base)?, &base.suspend(-d))? {
        IsoOutcome::Isomorphic(_) => Ok(Some(d)),
        IsoOutcome::NotIsomorphic(_) => Ok(None),
        IsoOutcome::Indeterminate => Err(Error::Indeterminate),
    }
}
