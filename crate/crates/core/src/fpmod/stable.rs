use super::functors::{augmentation_ideal, dual, tensor};
use super::module::GradedModule;
use super::reduce::reduce;
use crate::error::Result;

/// `Ω M`: the reduced part of `I ⊗ M`, with `I` the augmentation ideal.
pub fn loop_module(m: &GradedModule) -> Result<GradedModule> {
    let i = augmentation_ideal(m.algebra())?;
    Ok(reduce(&tensor(&i, m)?)?
        .reduced
        .with_name(format!("loop({})", m.name())))
}

/// `Ω⁻¹ M`: the reduced part of `D(I) ⊗ M`.
pub fn oloop_module(m: &GradedModule) -> Result<GradedModule> {
    let di = dual(&augmentation_ideal(m.algebra())?)?;
    Ok(reduce(&tensor(&di, m)?)?
        .reduced
        .with_name(format!("oloop({})", m.name())))
}
