use std::collections::{BTreeMap, BTreeSet};

use super::resolution::MinimalResolution;
use crate::error::{Error, Result};
use crate::f2linalg::{F2Matrix, F2Vector};
use crate::fpmod::GradedModule;

/// Dimensions of `Ext^{s,t}`, zero entries omitted.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ExtChart {
    pub entries: BTreeMap<(usize, i32), usize>,
    pub s_max: usize,
    pub t_max: i32,
}

impl ExtChart {
    pub fn new(s_max: usize, t_max: i32) -> ExtChart {
        ExtChart {
            entries: BTreeMap::new(),
            s_max,
            t_max,
        }
    }

    pub fn get(&self, s: usize, t: i32) -> usize {
        self.entries.get(&(s, t)).copied().unwrap_or(0)
    }

    fn set(&mut self, s: usize, t: i32, n: usize) {
        if n > 0 && s <= self.s_max && t <= self.t_max {
            self.entries.insert((s, t), n);
        }
    }

    pub fn total(&self) -> usize {
        self.entries.values().sum()
    }
}

pub fn minimal_resolution(m: &GradedModule, s_max: usize, t_max: i32) -> Result<MinimalResolution> {
    MinimalResolution::compute(m, s_max, t_max)
}

/// `Ext^{s,t}(m, F2)`, read off the generators of a minimal resolution.
pub fn ext_chart(m: &GradedModule, s_max: usize, t_max: i32) -> Result<ExtChart> {
    Ok(chart_of(&minimal_resolution(m, s_max, t_max)?))
}

pub fn chart_of(res: &MinimalResolution) -> ExtChart {
    let mut c = ExtChart::new(res.s_max, res.t_max);
    for ((s, t), n) in res.generator_counts() {
        c.set(s, t, n);
    }
    c
}

/// `Hom^t(F_s, n)`: maps lowering degree by `t`, one block `n^{deg g - t}` per
/// generator. Returns the block offsets and total dimension.
fn hom_layout(gens: &[i32], n: &GradedModule, t: i32) -> (Vec<usize>, usize) {
    let mut off = Vec::with_capacity(gens.len());
    let mut total = 0;
    for &g in gens {
        off.push(total);
        total += n.dim(g - t);
    }
    (off, total)
}

/// The coboundary `Hom^t(F_s, n) -> Hom^t(F_{s+1}, n)`, `f -> f∘d`.
fn coboundary(res: &MinimalResolution, s: usize, n: &GradedModule, t: i32) -> F2Matrix {
    let (src, tgt) = (&res.stages[s], &res.stages[s + 1]);
    let (off_s, dim_s) = hom_layout(&src.gens, n, t);
    let (off_t, dim_t) = hom_layout(&tgt.gens, n, t);
    let mut m = F2Matrix::zeros(dim_t, dim_s);
    for (h, &hd) in tgt.gens.iter().enumerate() {
        let ix = &src.index[&hd];
        for p in tgt.images[h].ones() {
            let (g, b) = ix[p];
            let gd = src.gens[g];
            // (f∘d)(h) gains b·f(g)
            let act = n.action(b, gd - t);
            for c in 0..act.cols() {
                for r in act.column(c).ones() {
                    let (row, col) = (off_t[h] + r, off_s[g] + c);
                    m.set(row, col, !m.get(row, col));
                }
            }
        }
    }
    m
}

/// `Ext^{s,t}(m, n)` for `s <= s_max` and `t <= t_max`, as cohomology of the
/// Hom complex on a minimal resolution of `m`. A degree-`t` map lowers degree
/// by `t`.
pub fn ext_groups(
    m: &GradedModule,
    n: &GradedModule,
    s_max: usize,
    t_max: i32,
) -> Result<ExtChart> {
    if m.algebra() != n.algebra() {
        return Err(Error::Unsupported(format!(
            "modules over {} and {}",
            m.algebra(),
            n.algebra()
        )));
    }
    let mut c = ExtChart::new(s_max, t_max);
    let Some(nhi) = n.max_degree() else {
        return Ok(c);
    };
    let Some(mlo) = m.min_degree() else {
        return Ok(c);
    };
    let res = minimal_resolution(m, s_max + 1, t_max + nhi)?;
    let t_lo = mlo - nhi;
    for t in t_lo..=t_max {
        let mut prev_rank = 0;
        for s in 0..=s_max {
            let (_, dim) = hom_layout(&res.stages[s].gens, n, t);
            let next = coboundary(&res, s, n, t);
            let rank = next.rank();
            c.set(s, t, dim - rank - prev_rank);
            prev_rank = rank;
        }
    }
    Ok(c)
}

/// Matrices of Yoneda multiplication by one class of `Ext(F2, F2)`, computed
/// from a chain-map lift.
#[derive(Clone, Debug)]
pub struct YonedaAction {
    /// The class: stage, internal degree, and index among that stage's
    /// generators of that degree.
    pub class: (usize, i32, usize),
    /// `(s, t) -> ` matrix from `Ext^{s,t}` to `Ext^{s+k, t+t0}`, in the bases
    /// of resolution generators. Present for every `(s, t)` where both lie in
    /// range.
    pub matrices: BTreeMap<(usize, i32), F2Matrix>,
}

/// Yoneda product with the class dual to generator `index` of stage `k` in
/// degree `t0`: the class is lifted to a chain map `F_{k+j} -> F_j` stage by
/// stage, and the matrix entry for generators `h` of `F_{k+j}` and `h'` of
/// `F_j` is the coefficient of `h'` in the lift of `h`. Valid for a
/// resolution of the trivial module.
pub fn yoneda_action(
    res: &MinimalResolution,
    k: usize,
    t0: i32,
    index: usize,
) -> Result<YonedaAction> {
    if res.target.total_dim() != 1 {
        return Err(Error::Unsupported(
            "Yoneda action needs a resolution of F2".into(),
        ));
    }
    let stage_k = res
        .stages
        .get(k)
        .ok_or_else(|| Error::Invalid(format!("no stage {k}")))?;
    let in_deg: Vec<usize> = (0..stage_k.gens.len())
        .filter(|&g| stage_k.gens[g] == t0)
        .collect();
    let &cls = in_deg
        .get(index)
        .ok_or_else(|| Error::Invalid(format!("no class ({k},{t0}) #{index}")))?;
    let mut matrices = BTreeMap::new();
    // lift[j][h] = image of generator h of F_{k+j} in F_j, degree gens[h] - t0
    let mut lift: Vec<Vec<F2Vector>> = Vec::new();
    for j in 0..res.stages.len() - k {
        let (src, tgt) = (&res.stages[k + j], &res.stages[j]);
        let mut imgs = Vec::with_capacity(src.gens.len());
        for (h, &hd) in src.gens.iter().enumerate() {
            let u = hd - t0;
            let img = if j == 0 {
                if h == cls {
                    F2Vector::unit(tgt.module.dim(u), tgt.gen_position(0))
                } else {
                    F2Vector::zeros(tgt.module.dim(u))
                }
            } else {
                let below = &res.stages[j - 1];
                let rhs = res.stages[k + j - 1].apply_map(
                    &lift[j - 1],
                    &below.module,
                    -t0,
                    hd,
                    &src.images[h],
                );
                if u > res.t_max {
                    F2Vector::zeros(0)
                } else {
                    tgt.differential.matrix(u).solve(&rhs)?.ok_or_else(|| {
                        Error::Invalid(format!("chain lift failed at stage {j}, degree {u}"))
                    })?
                }
            };
            imgs.push(img);
        }
        for t in tgt.gens.iter().copied().collect::<BTreeSet<_>>() {
            if t + t0 > res.t_max {
                continue;
            }
            let rows: Vec<usize> = (0..src.gens.len())
                .filter(|&h| src.gens[h] == t + t0)
                .collect();
            let cols: Vec<usize> = (0..tgt.gens.len()).filter(|&g| tgt.gens[g] == t).collect();
            let mut mat = F2Matrix::zeros(rows.len(), cols.len());
            for (r, &h) in rows.iter().enumerate() {
                for (c, &g) in cols.iter().enumerate() {
                    mat.set(r, c, imgs[h].get(tgt.gen_position(g)));
                }
            }
            matrices.insert((j, t), mat);
        }
        lift.push(imgs);
    }
    Ok(YonedaAction {
        class: (k, t0, index),
        matrices,
    })
}
