use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::f2linalg::{Echelon, F2Matrix, F2Vector};
use crate::fpmod::{free_labeled, GradedModule, ModuleMap};
use crate::steenrod::SubAlgebra;

/// One free stage: generators, the free module on them truncated above the
/// resolution's internal-degree bound, and the differential out of it.
#[derive(Clone, Debug)]
pub struct Stage {
    /// Generator degrees, ascending.
    pub gens: Vec<i32>,
    pub module: Arc<GradedModule>,
    /// Per degree, the `(generator, algebra basis index)` of each basis vector.
    pub index: BTreeMap<i32, Vec<(usize, usize)>>,
    /// Images of the generators in the previous stage (or the target module).
    pub images: Vec<F2Vector>,
    pub differential: ModuleMap,
}

impl Stage {
    /// Position of generator `g` in its own degree.
    pub fn gen_position(&self, g: usize) -> usize {
        let d = self.gens[g];
        let unit = self.module.algebra().in_degree(0)[0];
        self.index[&d]
            .iter()
            .position(|&(i, b)| i == g && b == unit)
            .expect("generator present")
    }

    /// Apply the algebra-linear map sending generator `g` to `images[g]` (in
    /// `target`, degree `gens[g] + shift`) to the degree-`u` vector `v`.
    pub fn apply_map(
        &self,
        images: &[F2Vector],
        target: &GradedModule,
        shift: i32,
        u: i32,
        v: &F2Vector,
    ) -> F2Vector {
        let mut out = F2Vector::zeros(target.dim(u + shift));
        if let Some(ix) = self.index.get(&u) {
            for p in v.ones() {
                let (g, b) = ix[p];
                out.add_assign(&target.action(b, self.gens[g] + shift).mul_vec(&images[g]));
            }
        }
        out
    }
}

/// A minimal free resolution, complete in internal degrees up to `t_max`
/// and homological degrees up to `s_max`.
#[derive(Clone, Debug)]
pub struct MinimalResolution {
    pub target: Arc<GradedModule>,
    pub s_max: usize,
    pub t_max: i32,
    pub stages: Vec<Stage>,
}

impl MinimalResolution {
    pub fn compute(m: &GradedModule, s_max: usize, t_max: i32) -> Result<MinimalResolution> {
        let alg = m.algebra().clone();
        let target = Arc::new(m.clone());
        let lo = m.min_degree().unwrap_or(0);
        let mut stages: Vec<Stage> = Vec::new();
        for s in 0..=s_max {
            let (prev, prev_kernel): (Arc<GradedModule>, Box<dyn Fn(i32) -> Vec<F2Vector>>) = if s
                == 0
            {
                let t = target.clone();
                (
                    target.clone(),
                    Box::new(move |d| (0..t.dim(d)).map(|i| F2Vector::unit(t.dim(d), i)).collect()),
                )
            } else {
                let st = stages[s - 1].clone();
                (
                    st.module.clone(),
                    Box::new(move |d| st.differential.matrix(d).kernel_basis()),
                )
            };
            let mut gens: Vec<i32> = Vec::new();
            let mut images: Vec<F2Vector> = Vec::new();
            for t in lo + s as i32..=t_max {
                let n = prev.dim(t);
                if n == 0 {
                    continue;
                }
                let mut image = Echelon::span(n);
                for (g, &gd) in gens.iter().enumerate() {
                    if t - gd > alg.top_degree() as i32 {
                        continue;
                    }
                    for &b in alg.in_degree((t - gd) as u32) {
                        image.insert(&prev.action(b, gd).mul_vec(&images[g]));
                    }
                }
                for k in prev_kernel(t) {
                    if image.insert(&k) {
                        gens.push(t);
                        images.push(k);
                    }
                }
            }
            let labels: Vec<(i32, String)> = (0..gens.len())
                .map(|i| (gens[i], format!("x{s}_{i}")))
                .collect();
            let (free, index) = free_labeled(&alg, &labels, Some(t_max));
            let free = Arc::new(free.with_name(format!("F{s}")));
            let mats: BTreeMap<i32, F2Matrix> = free
                .degrees()
                .into_iter()
                .map(|u| {
                    let cols: Vec<F2Vector> = index[&u]
                        .iter()
                        .map(|&(g, b)| prev.action(b, gens[g]).mul_vec(&images[g]))
                        .collect();
                    (u, F2Matrix::from_columns(prev.dim(u), &cols))
                })
                .collect();
            let differential = ModuleMap::new(free.clone(), prev.clone(), 0, mats)?;
            stages.push(Stage {
                gens,
                module: free,
                index,
                images,
                differential,
            });
        }
        let res = MinimalResolution {
            target,
            s_max,
            t_max,
            stages,
        };
        if let Some(why) = res.minimality_failure() {
            return Err(Error::Invalid(why));
        }
        Ok(res)
    }

    pub fn algebra(&self) -> &Arc<SubAlgebra> {
        self.target.algebra()
    }

    /// Every generator maps into the positive part of the algebra times the
    /// previous stage: no image has a component on a previous generator.
    pub fn minimality_failure(&self) -> Option<String> {
        for s in 1..self.stages.len() {
            let prev = &self.stages[s - 1];
            for (g, img) in self.stages[s].images.iter().enumerate() {
                let d = self.stages[s].gens[g];
                for p in img.ones() {
                    if prev.index[&d][p].1 == self.algebra().in_degree(0)[0] {
                        return Some(format!(
                            "generator {g} of stage {s} hits a generator of stage {}",
                            s - 1
                        ));
                    }
                }
            }
        }
        None
    }

    /// Generator counts `(s, t) -> n`.
    pub fn generator_counts(&self) -> BTreeMap<(usize, i32), usize> {
        let mut out = BTreeMap::new();
        for (s, st) in self.stages.iter().enumerate() {
            for &t in &st.gens {
                *out.entry((s, t)).or_insert(0) += 1;
            }
        }
        out
    }

    /// The chain `F_s -> ... -> F_0 -> M -> 0` as maps in increasing index
    /// order, for exactness checks.
    pub fn chain(&self) -> Vec<ModuleMap> {
        let mut seq: Vec<ModuleMap> = self
            .stages
            .iter()
            .rev()
            .map(|s| s.differential.clone())
            .collect();
        let zero = Arc::new(GradedModule::zero(self.algebra().clone()));
        seq.push(ModuleMap::zero(&self.target, &zero, 0));
        seq
    }
}
