use std::collections::BTreeMap;
use std::sync::Arc;

use super::module::GradedModule;
use crate::error::{Error, Result};
use crate::f2linalg::{Echelon, F2Matrix, F2Vector};

/// A module homomorphism raising degree by `shift`: degree `d` of the source
/// goes to degree `d + shift` of the target.
#[derive(Clone, Debug)]
pub struct ModuleMap {
    source: Arc<GradedModule>,
    target: Arc<GradedModule>,
    shift: i32,
    mats: BTreeMap<i32, F2Matrix>,
}

impl ModuleMap {
    /// Checks shapes and that the map commutes with every generator.
    pub fn new(
        source: Arc<GradedModule>,
        target: Arc<GradedModule>,
        shift: i32,
        mats: BTreeMap<i32, F2Matrix>,
    ) -> Result<ModuleMap> {
        let m = Self::new_unchecked(source, target, shift, mats)?;
        if let Some((g, d)) = m.equivariance_failure() {
            return Err(Error::Invalid(format!(
                "map does not commute with {} in source degree {d}",
                m.source.algebra().gen_name(g)
            )));
        }
        Ok(m)
    }

    /// Checks shapes only.
    pub fn new_unchecked(
        source: Arc<GradedModule>,
        target: Arc<GradedModule>,
        shift: i32,
        mut mats: BTreeMap<i32, F2Matrix>,
    ) -> Result<ModuleMap> {
        if source.algebra() != target.algebra() {
            return Err(Error::Unsupported(format!(
                "map between modules over {} and {}",
                source.algebra(),
                target.algebra()
            )));
        }
        mats.retain(|&d, _| source.dim(d) > 0);
        for d in source.degrees() {
            let m = mats
                .entry(d)
                .or_insert_with(|| F2Matrix::zeros(target.dim(d + shift), source.dim(d)));
            if m.rows() != target.dim(d + shift) || m.cols() != source.dim(d) {
                return Err(Error::DimensionMismatch(format!(
                    "map matrix in degree {d} is {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    target.dim(d + shift),
                    source.dim(d)
                )));
            }
        }
        Ok(ModuleMap {
            source,
            target,
            shift,
            mats,
        })
    }

    fn equivariance_failure(&self) -> Option<(usize, i32)> {
        let alg = self.source.algebra();
        for g in 0..alg.num_gens() {
            let k = alg.gen_degree(g) as i32;
            for d in self.source.degrees() {
                let lhs = self.matrix(d + k).mul(&self.source.gen_action(g, d));
                let rhs = self
                    .target
                    .gen_action(g, d + self.shift)
                    .mul(&self.matrix(d));
                if lhs != rhs {
                    return Some((g, d));
                }
            }
        }
        None
    }

    pub fn identity(m: &Arc<GradedModule>) -> ModuleMap {
        let mats = m
            .degrees()
            .into_iter()
            .map(|d| (d, F2Matrix::identity(m.dim(d))))
            .collect();
        ModuleMap {
            source: m.clone(),
            target: m.clone(),
            shift: 0,
            mats,
        }
    }

    pub fn zero(source: &Arc<GradedModule>, target: &Arc<GradedModule>, shift: i32) -> ModuleMap {
        Self::new_unchecked(source.clone(), target.clone(), shift, BTreeMap::new()).unwrap()
    }

    /// The unique map from a module generated by the listed vectors, sending
    /// them to the given images, if one exists. `gens` are `(degree, vector)`
    /// in the source; `images` are vectors in degree `degree + shift` of the
    /// target.
    pub fn from_generator_images(
        source: Arc<GradedModule>,
        target: Arc<GradedModule>,
        shift: i32,
        gens: &[(i32, F2Vector)],
        images: &[F2Vector],
    ) -> Result<ModuleMap> {
        let alg = source.algebra().clone();
        // Collect (a * gen, a * image) pairs per source degree.
        let mut pairs: BTreeMap<i32, Vec<(F2Vector, F2Vector)>> = BTreeMap::new();
        for ((d, v), w) in gens.iter().zip(images) {
            for b in 0..alg.dim() {
                let e = d + alg.degree_of(b) as i32;
                if source.dim(e) == 0 {
                    continue;
                }
                let sv = source.action(b, *d).mul_vec(v);
                let tw = target.action(b, d + shift).mul_vec(w);
                pairs.entry(e).or_default().push((sv, tw));
            }
        }
        let mut mats = BTreeMap::new();
        for d in source.degrees() {
            let n = source.dim(d);
            let ps = pairs.remove(&d).unwrap_or_default();
            let mut ech = Echelon::new(n, ps.len());
            let mut kept: Vec<(F2Vector, F2Vector)> = Vec::new();
            for (sv, tw) in ps {
                // Dependent pairs must be consistent with what is already fixed.
                match ech.coords(&sv) {
                    Some(c) => {
                        let mut img = F2Vector::zeros(target.dim(d + shift));
                        for i in c.ones() {
                            img.add_assign(&kept[i].1);
                        }
                        if img != tw {
                            return Err(Error::Invalid(format!(
                                "generator images are inconsistent in degree {d}"
                            )));
                        }
                    }
                    None => {
                        ech.insert(&sv);
                        kept.push((sv, tw));
                    }
                }
            }
            if kept.len() != n {
                return Err(Error::Invalid(format!(
                    "listed elements do not generate degree {d}"
                )));
            }
            let s =
                F2Matrix::from_columns(n, &kept.iter().map(|p| p.0.clone()).collect::<Vec<_>>());
            let t = F2Matrix::from_columns(
                target.dim(d + shift),
                &kept.iter().map(|p| p.1.clone()).collect::<Vec<_>>(),
            );
            // matrix * s = t, with s invertible
            let inv = invert(&s);
            mats.insert(d, t.mul(&inv));
        }
        Self::new(source, target, shift, mats)
    }

    pub fn source(&self) -> &Arc<GradedModule> {
        &self.source
    }

    pub fn target(&self) -> &Arc<GradedModule> {
        &self.target
    }

    pub fn shift(&self) -> i32 {
        self.shift
    }

    /// Matrix from source degree `d`.
    pub fn matrix(&self, d: i32) -> F2Matrix {
        self.mats
            .get(&d)
            .cloned()
            .unwrap_or_else(|| F2Matrix::zeros(self.target.dim(d + self.shift), self.source.dim(d)))
    }

    pub fn matrices(&self) -> &BTreeMap<i32, F2Matrix> {
        &self.mats
    }

    pub fn apply(&self, d: i32, v: &F2Vector) -> F2Vector {
        self.matrix(d).mul_vec(v)
    }

    /// `other` after `self`.
    pub fn then(&self, other: &ModuleMap) -> Result<ModuleMap> {
        if !Arc::ptr_eq(&self.target, &other.source)
            && !self.target.same_presentation(&other.source)
        {
            return Err(Error::Unsupported("maps are not composable".into()));
        }
        let mats = self
            .source
            .degrees()
            .into_iter()
            .map(|d| (d, other.matrix(d + self.shift).mul(&self.matrix(d))))
            .collect();
        Self::new_unchecked(
            self.source.clone(),
            other.target.clone(),
            self.shift + other.shift,
            mats,
        )
    }

    pub fn is_zero(&self) -> bool {
        self.mats.values().all(|m| m.is_zero())
    }

    pub fn is_bijective(&self) -> bool {
        let degs: std::collections::BTreeSet<i32> = self
            .source
            .degrees()
            .into_iter()
            .chain(self.target.degrees().into_iter().map(|d| d - self.shift))
            .collect();
        degs.into_iter().all(|d| {
            let m = self.matrix(d);
            m.rows() == m.cols() && m.is_invertible()
        })
    }

    /// Per-degree kernel, indexed by source degree.
    pub fn kernel(&self) -> BTreeMap<i32, Vec<F2Vector>> {
        self.source
            .degrees()
            .into_iter()
            .map(|d| (d, self.matrix(d).kernel_basis()))
            .collect()
    }

    /// Inverse of a bijective degree-0-shift map.
    pub fn inverse(&self) -> Result<ModuleMap> {
        if !self.is_bijective() {
            return Err(Error::Unsupported("map is not bijective".into()));
        }
        let mats = self
            .target
            .degrees()
            .into_iter()
            .map(|d| (d, invert(&self.matrix(d - self.shift))))
            .collect();
        Self::new_unchecked(self.target.clone(), self.source.clone(), -self.shift, mats)
    }
}

/// Inverse of a square invertible matrix.
pub fn invert(m: &F2Matrix) -> F2Matrix {
    let n = m.rows();
    let aug = m.hstack(&F2Matrix::identity(n));
    let r = aug.rref();
    assert_eq!(r.rank, n, "matrix is not invertible");
    let mut out = F2Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            out.set(i, j, r.reduced.get(i, n + j));
        }
    }
    out
}

/// Position of the first failure of exactness in a chain of maps, where the
/// composite of consecutive maps must vanish and image must equal kernel at
/// every interior module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactnessFailure {
    /// Index of the module where exactness fails: the target of map `stage`.
    pub stage: usize,
    pub degree: i32,
    pub reason: String,
}

/// `seq[i]` goes from module i to module i+1. Interior modules are the
/// targets of `seq[0..len-1]`.
pub fn check_exact(seq: &[ModuleMap]) -> std::result::Result<(), ExactnessFailure> {
    for i in 0..seq.len().saturating_sub(1) {
        let (f, g) = (&seq[i], &seq[i + 1]);
        let mid = f.target();
        let same = Arc::ptr_eq(mid, g.source()) || mid.same_presentation(g.source());
        if !same {
            return Err(ExactnessFailure {
                stage: i,
                degree: 0,
                reason: "maps are not composable".into(),
            });
        }
        for d in mid.degrees() {
            let gm = g.matrix(d);
            let fm = f.matrix(d - f.shift());
            if !gm.mul(&fm).is_zero() {
                return Err(ExactnessFailure {
                    stage: i,
                    degree: d,
                    reason: "composite is nonzero".into(),
                });
            }
            let ker = mid.dim(d) - gm.rank();
            let im = fm.rank();
            if ker != im {
                return Err(ExactnessFailure {
                    stage: i,
                    degree: d,
                    reason: format!("kernel has dimension {ker} but image has dimension {im}"),
                });
            }
        }
    }
    Ok(())
}
