//! Seeded property checks over the fixture library and random matrices.
//! Each returns the first counterexample as an error message.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use stmod::f2linalg::{F2Matrix, F2Vector};
use stmod::fpmod::*;
use stmod::steenrod::{MilnorBasisElt, SteenrodElt};

pub type Check = Result<(), String>;

fn iso(a: &GradedModule, b: &GradedModule) -> bool {
    matches!(iso_test(a, b), Ok(IsoOutcome::Isomorphic(_)))
}

pub fn fixtures() -> Vec<(String, GradedModule)> {
    let lib = Library::shipped();
    lib.names()
        .unwrap()
        .into_iter()
        .map(|n| {
            let m = lib.module(&n).unwrap().as_ref().clone();
            (n, m)
        })
        .collect()
}

pub fn dual_involution() -> Check {
    for (name, m) in fixtures() {
        let dd = dual(&dual(&m).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        if !iso(&dd, &m) {
            return Err(format!("D(D({name})) is not isomorphic to {name}"));
        }
    }
    Ok(())
}

/// Random triples of small A(1) fixtures, suspended at random.
pub fn tensor_laws(seed: u64, trials: usize) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let small: Vec<(String, GradedModule)> = fixtures()
        .into_iter()
        .filter(|(_, m)| m.algebra().name() == "A(1)" && m.total_dim() <= 5)
        .collect();
    for _ in 0..trials {
        let mut pick = || {
            let (n, m) = &small[rng.gen_range(0..small.len())];
            let k = rng.gen_range(-3..=3);
            (format!("{n}[{k}]"), m.suspend(k))
        };
        let (na, a) = pick();
        let (nb, b) = pick();
        let (nc, c) = pick();
        let ab = tensor(&a, &b).unwrap();
        if !iso(&ab, &tensor(&b, &a).unwrap()) {
            return Err(format!("{na} (x) {nb} is not symmetric"));
        }
        let left = tensor(&ab, &c).unwrap();
        let right = tensor(&a, &tensor(&b, &c).unwrap()).unwrap();
        if !iso(&left, &right) {
            return Err(format!(
                "({na} (x) {nb}) (x) {nc} differs from {na} (x) ({nb} (x) {nc})"
            ));
        }
    }
    Ok(())
}

/// Fixtures plus a few tensor products that carry free summands.
fn reduce_inputs() -> Vec<(String, GradedModule)> {
    let mut v = fixtures();
    let lib = Library::shipped();
    for e in [
        "tensor(Joker, Joker)",
        "tensor(HZ, HZ)",
        "tensor(Joker, A1)",
        "sum(A1, Joker[3])",
    ] {
        v.push((e.to_string(), eval(e, &lib).unwrap()));
    }
    v
}

pub fn reduce_idempotent() -> Check {
    for (name, m) in reduce_inputs() {
        let r = reduce(&m).map_err(|e| format!("{name}: {e}"))?;
        let rr = reduce(&r.reduced).map_err(|e| format!("{name}: {e}"))?;
        if !rr.free_part.is_empty() {
            return Err(format!(
                "reduced part of {name} still has free summands {:?}",
                rr.free_part
            ));
        }
        if !iso(&rr.reduced, &r.reduced) {
            return Err(format!("reducing {name} twice changed the result"));
        }
        let free = r.free_part.len() * m.algebra().dim();
        if r.reduced.total_dim() + free != m.total_dim() {
            return Err(format!("{name}: dimensions do not add up"));
        }
    }
    Ok(())
}

/// The Milnor primitives `Sq(0,..,0,2^s)` (entry `t`, `s < t`) in the algebra of `m`.
fn primitives_in(m: &GradedModule) -> Vec<SteenrodElt> {
    let alg = m.algebra();
    let n = alg.ambient_n();
    let mut out = Vec::new();
    for t in 1..=(n as usize + 1) {
        for s in 0..t {
            let mut exps = vec![0u32; t];
            exps[t - 1] = 1 << s;
            if let Ok(e) = SteenrodElt::from_basis(MilnorBasisElt::new(exps), Some(n)) {
                if alg.contains(&e) {
                    out.push(e);
                }
            }
        }
    }
    out
}

pub fn margolis_detects_freeness() -> Check {
    for (name, m) in reduce_inputs() {
        if !m.algebra().is_sub_hopf() {
            continue;
        }
        let prims = primitives_in(&m);
        let mut acyclic = true;
        for q in &prims {
            if !homology_of(&m, q).map_err(|e| e.to_string())?.is_empty() {
                acyclic = false;
            }
        }
        let free = reduce(&m).map_err(|e| e.to_string())?.reduced.is_zero();
        if acyclic != free {
            return Err(format!(
                "{name}: Margolis homology vanishes = {acyclic}, free = {free}"
            ));
        }
    }
    Ok(())
}

/// Random matrices against exhaustive enumeration of their kernels.
pub fn rref_kernel_oracle(seed: u64, trials: usize) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let rows = rng.gen_range(1..=9);
        let cols = rng.gen_range(1..=11);
        let bits: Vec<Vec<bool>> = (0..rows)
            .map(|_| (0..cols).map(|_| rng.gen_bool(0.4)).collect())
            .collect();
        let m = F2Matrix::from_bools(&bits);
        let r = m.rref();
        let mut brute = 0;
        for x in 0u32..1 << cols {
            let v = F2Vector::from_bits(&(0..cols).map(|j| x >> j & 1 == 1).collect::<Vec<_>>());
            let killed = m.mul_vec(&v).is_zero();
            if killed != r.reduced.mul_vec(&v).is_zero() {
                return Err(format!("{rows}x{cols}: rref changed the row space"));
            }
            brute += killed as usize;
        }
        for (i, &c) in r.pivot_cols.iter().enumerate() {
            if r.reduced.column(c) != F2Vector::unit(rows, i) {
                return Err(format!(
                    "{rows}x{cols}: pivot column {c} is not a unit vector"
                ));
            }
        }
        let ker = m.kernel_basis();
        if 1usize << ker.len() != brute
            || ker.len() + r.rank != cols
            || r.pivot_cols.len() != r.rank
        {
            return Err(format!(
                "{rows}x{cols}: kernel basis has {} vectors, enumeration {brute}",
                ker.len()
            ));
        }
        if ker.iter().any(|v| !m.mul_vec(v).is_zero()) {
            return Err(format!("{rows}x{cols}: kernel vector not killed"));
        }
    }
    Ok(())
}
