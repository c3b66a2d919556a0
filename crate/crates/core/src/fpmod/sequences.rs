use std::sync::Arc;

use super::functors::{hopf_quotient, quotient_by_left_ideal};
use super::map::ModuleMap;
use super::module::GradedModule;
use crate::error::{Error, Result};
use crate::f2linalg::F2Vector;
use crate::steenrod::{milnor_primitive, SubAlgebra};

/// Chain `0 -> M_k -> ... -> M_1 -> M_0 -> 0` of cyclic modules, listed from
/// `M_0`. Each `M_i -> M_{i-1}` sends the bottom class of `M_i` to the
/// kernel of the previous map in that degree, which must be a line.
/// Returned maps run left to right, starting and ending at zero modules.
pub fn cover_chain(modules: Vec<GradedModule>) -> Result<Vec<ModuleMap>> {
    let alg = modules
        .first()
        .ok_or_else(|| Error::Unsupported("empty chain".into()))?
        .algebra()
        .clone();
    let mods: Vec<Arc<GradedModule>> = modules.into_iter().map(Arc::new).collect();
    let zero = Arc::new(GradedModule::zero(alg));
    let mut down: Vec<ModuleMap> = vec![ModuleMap::zero(&mods[0], &zero, 0)];
    for i in 1..mods.len() {
        let d = mods[i]
            .min_degree()
            .ok_or_else(|| Error::Unsupported("zero module in chain".into()))?;
        if mods[i].dim(d) != 1 {
            return Err(Error::Unsupported(format!(
                "{} is not cyclic on one bottom class",
                mods[i].name()
            )));
        }
        let ker = down[i - 1].matrix(d).kernel_basis();
        if ker.len() != 1 {
            return Err(Error::Invalid(format!(
                "kernel in degree {d} has dimension {}",
                ker.len()
            )));
        }
        let gen = (d, F2Vector::unit(1, 0));
        down.push(ModuleMap::from_generator_images(
            mods[i].clone(),
            mods[i - 1].clone(),
            0,
            &[gen],
            &ker,
        )?);
    }
    let last = mods.last().unwrap();
    let mut seq = vec![ModuleMap::zero(&zero, last, 0)];
    seq.extend(down.into_iter().skip(1).rev());
    seq.push(ModuleMap::zero(&mods[0], &zero, 0));
    Ok(seq)
}

/// `0 -> F2[12] -> HZ[7] -> A(1)[4] -> A(1)[2] -> HZ -> F2 -> 0` over A(1),
/// with `HZ = A(1)//A(0)`.
pub fn bott_sequence() -> Result<Vec<ModuleMap>> {
    let a1 = SubAlgebra::a(1)?;
    let hz = hopf_quotient(&a1, &*SubAlgebra::a_in(0, 1)?)?;
    let free = GradedModule::regular(&a1).as_ref().clone();
    let f2 = GradedModule::trivial(a1);
    cover_chain(vec![
        f2.clone(),
        hz.clone(),
        free.suspend(2),
        free.suspend(4),
        hz.suspend(7),
        f2.suspend(12),
    ])
}

/// The periodic resolution `... -> A(1)[6] -> A(1)[3] -> A(1) -> A(1)//F2(P(1,1)) -> 0`
/// with `len` free stages, each map multiplying by `P(1,1)`.
pub fn p11_resolution(len: usize) -> Result<Vec<ModuleMap>> {
    let a1 = SubAlgebra::a(1)?;
    let p = milnor_primitive(1, 1)?;
    let target = quotient_by_left_ideal(&a1, &[p])?;
    let free = GradedModule::regular(&a1).as_ref().clone();
    let mut mods = vec![target];
    mods.extend((0..len).map(|i| free.suspend(3 * i as i32)));
    let mut seq = cover_chain(mods)?;
    // The last free stage is not exact on the left; drop its zero map.
    seq.remove(0);
    Ok(seq)
}
