use std::collections::BTreeMap;

use super::module::GradedModule;
use crate::error::{Error, Result};
use crate::steenrod::{milnor_primitive, SteenrodElt};

/// Homology of a square-zero homogeneous element acting on `m`, as nonzero
/// dimensions per degree.
pub fn homology_of(m: &GradedModule, q: &SteenrodElt) -> Result<BTreeMap<i32, usize>> {
    let k = q
        .degree()
        .ok_or_else(|| Error::Unsupported("zero element has no homology".into()))?
        as i32;
    let mut out = BTreeMap::new();
    for d in m.degrees() {
        let next = m.act_elt(q, d)?;
        let prev = m.act_elt(q, d - k)?;
        if !m.act_elt(q, d + k)?.mul(&next).is_zero() {
            return Err(Error::Invalid(format!(
                "{q} does not square to zero on {}",
                m.name()
            )));
        }
        let h = m.dim(d) - next.rank() - prev.rank();
        if h > 0 {
            out.insert(d, h);
        }
    }
    Ok(out)
}

/// Margolis homology for the primitive `P(1,s)`.
pub fn margolis_homology(m: &GradedModule, s: u32) -> Result<BTreeMap<i32, usize>> {
    let q = milnor_primitive(s, m.algebra().ambient_n())?;
    if !m.algebra().contains(&q) {
        return Err(Error::NotSubalgebra(format!(
            "P(1,{s}) is not in {}",
            m.algebra()
        )));
    }
    homology_of(m, &q)
}

/// The `s` for which `P(1,s)` lies in the algebra of `m`.
pub fn available_primitives(m: &GradedModule) -> Vec<u32> {
    let alg = m.algebra();
    (0..=alg.ambient_n())
        .filter(|&s| milnor_primitive(s, alg.ambient_n()).is_ok_and(|q| alg.contains(&q)))
        .collect()
}
