use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use super::module::{word_label, GradedModule};
use crate::error::{Error, Result};
use crate::f2linalg::{F2Matrix, F2Vector};
use crate::steenrod::{SteenrodElt, SubAlgebra};

/// The coproduct of generator `g` written in the basis of `alg ⊗ alg`, as
/// pairs of basis indices. Requires `alg` to be closed under the coproduct.
pub fn coproduct_in(alg: &SubAlgebra, g: usize) -> Result<Vec<(usize, usize)>> {
    if !alg.is_sub_hopf() {
        return Err(Error::NoDiagonalAction);
    }
    let amb = alg.ambient();
    // Group the Milnor pairs by bidegree.
    let mut parts: BTreeMap<(u32, u32), Vec<(SteenrodElt, SteenrodElt)>> = BTreeMap::new();
    for (l, r) in alg.generators()[g].coproduct() {
        parts
            .entry((l.degree().unwrap(), r.degree().unwrap()))
            .or_default()
            .push((l, r));
    }
    let mut out = Vec::new();
    for ((p, q), pairs) in parts {
        let (np, nq) = (amb.dim_in(p), amb.dim_in(q));
        let mut target = F2Vector::zeros(np * nq);
        for (l, r) in &pairs {
            let (lv, rv) = (amb.vector(l, p), amb.vector(r, q));
            let (i, j) = (lv.first_one().unwrap(), rv.first_one().unwrap());
            target.flip(i * nq + j);
        }
        let lp: Vec<F2Vector> = alg
            .in_degree(p)
            .iter()
            .map(|&b| amb.vector(&alg.basis()[b], p))
            .collect();
        let rq: Vec<F2Vector> = alg
            .in_degree(q)
            .iter()
            .map(|&b| amb.vector(&alg.basis()[b], q))
            .collect();
        let lm = F2Matrix::from_columns(np, &lp);
        let rm = F2Matrix::from_columns(nq, &rq);
        let sys = lm.kron(&rm);
        let sol = sys.solve(&target)?.ok_or(Error::NoDiagonalAction)?;
        let nr = rq.len();
        for k in sol.ones() {
            out.push((alg.in_degree(p)[k / nr], alg.in_degree(q)[k % nr]));
        }
    }
    Ok(out)
}

/// The linear dual, graded by `D(M)^{-d} = (M^d)^*`, with `a` acting by the
/// transpose of its conjugate.
pub fn dual(m: &GradedModule) -> Result<GradedModule> {
    let alg = m.algebra().clone();
    let mut conj = Vec::new();
    for g in alg.generators() {
        let c = g.antipode();
        if !alg.contains(&c) {
            return Err(Error::Unsupported(format!(
                "the conjugate of {g} is not in {alg}"
            )));
        }
        conj.push(c);
    }
    let basis: BTreeMap<i32, Vec<String>> = m
        .degrees()
        .into_iter()
        .map(|d| (-d, m.labels(d).iter().map(|l| dual_label(l)).collect()))
        .collect();
    let mut err = None;
    let out = GradedModule::from_parts(format!("D({})", m.name()), alg.clone(), basis, |g, e| {
        let k = alg.gen_degree(g) as i32;
        // from (M^{-e})^* to (M^{-e-k})^*: transpose of chi(g): M^{-e-k} -> M^{-e}
        match m.act_elt(&conj[g], -e - k) {
            Ok(a) => a.transpose(),
            Err(x) => {
                err = Some(x);
                F2Matrix::zeros(m.dim(-e - k), m.dim(-e))
            }
        }
    })?;
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

fn dual_label(l: &str) -> String {
    match l.strip_suffix('*') {
        Some(s) if !s.is_empty() => s.to_string(),
        _ => format!("{l}*"),
    }
}

/// Tensor product with the diagonal action. Basis in degree `d` runs over
/// degrees `a` of `m` ascending, then pairs with `n`'s index varying fastest.
pub fn tensor(m: &GradedModule, n: &GradedModule) -> Result<GradedModule> {
    let alg = m.algebra().clone();
    if n.algebra() != &alg {
        return Err(Error::Unsupported(format!(
            "tensor of modules over {} and {}",
            alg,
            n.algebra()
        )));
    }
    let cop: Vec<Vec<(usize, usize)>> = (0..alg.num_gens())
        .map(|g| coproduct_in(&alg, g))
        .collect::<Result<_>>()?;
    let (md, nd) = (m.degrees(), n.degrees());
    let mut basis: BTreeMap<i32, Vec<String>> = BTreeMap::new();
    // offsets[(d, a)] = start of block m^a ⊗ n^{d-a} within degree d
    let mut offsets: HashMap<(i32, i32), usize> = HashMap::new();
    let mut degs: Vec<i32> = md
        .iter()
        .flat_map(|a| nd.iter().map(move |b| a + b))
        .collect();
    degs.sort();
    degs.dedup();
    for &d in &degs {
        let labels = basis.entry(d).or_default();
        for &a in &md {
            if n.dim(d - a) == 0 {
                continue;
            }
            offsets.insert((d, a), labels.len());
            for x in m.labels(a) {
                for y in n.labels(d - a) {
                    labels.push(format!("{x}|{y}"));
                }
            }
        }
    }
    GradedModule::from_parts(
        format!("{}|{}", m.name(), n.name()),
        alg.clone(),
        basis,
        |g, d| {
            let k = alg.gen_degree(g) as i32;
            let rows: usize = md.iter().map(|&a| m.dim(a) * n.dim(d + k - a)).sum();
            let cols: usize = md.iter().map(|&a| m.dim(a) * n.dim(d - a)).sum();
            let mut out = F2Matrix::zeros(rows, cols);
            for &(l, r) in &cop[g] {
                let dl = alg.degree_of(l) as i32;
                for &a in &md {
                    let b = d - a;
                    if n.dim(b) == 0 || m.dim(a + dl) == 0 || n.dim(b + k - dl) == 0 {
                        continue;
                    }
                    let block = m.action(l, a).kron(&n.action(r, b));
                    let (r0, c0) = (offsets[&(d + k, a + dl)], offsets[&(d, a)]);
                    for i in 0..block.rows() {
                        for j in block.row(i).ones() {
                            let cur = out.get(r0 + i, c0 + j);
                            out.set(r0 + i, c0 + j, !cur);
                        }
                    }
                }
            }
            out
        },
    )
}

/// The cyclic module `alg / alg·{gens}`.
pub fn quotient_by_left_ideal(alg: &Arc<SubAlgebra>, gens: &[SteenrodElt]) -> Result<GradedModule> {
    let reg = GradedModule::regular(alg);
    let mut elems = Vec::new();
    let mut names = Vec::new();
    for g in gens {
        let g = g.in_ambient(Some(alg.ambient_n()))?;
        names.push(g.to_string());
        for (d, part) in g.components() {
            let v = alg
                .coords_in_degree(d, &part)
                .ok_or_else(|| Error::NotSubalgebra(format!("{part} is not in {alg}")))?;
            elems.push((d as i32, v));
        }
    }
    let sub = reg.generated_submodule(&elems);
    let name = format!("{}/{}{{{}}}", alg.name(), alg.name(), names.join(", "));
    Ok(reg.quotient(&sub, name)?.0)
}

/// `h // k = h / h·k⁺`.
pub fn hopf_quotient(h: &Arc<SubAlgebra>, k: &SubAlgebra) -> Result<GradedModule> {
    let gens: Vec<SteenrodElt> = k
        .generators()
        .iter()
        .map(|g| g.in_ambient(Some(h.ambient_n())))
        .collect::<Result<_>>()?;
    for g in &gens {
        if !h.contains(g) {
            return Err(Error::NotSubalgebra(format!("{k} is not contained in {h}")));
        }
    }
    Ok(quotient_by_left_ideal(h, &gens)?.with_name(format!("{}//{}", h.name(), k.name())))
}

/// The augmentation ideal: the positive-degree part of the regular module.
pub fn augmentation_ideal(alg: &Arc<SubAlgebra>) -> Result<GradedModule> {
    let reg = GradedModule::regular(alg);
    let basis: BTreeMap<i32, Vec<F2Vector>> = reg
        .degrees()
        .into_iter()
        .filter(|&d| d > 0)
        .map(|d| {
            (
                d,
                (0..reg.dim(d))
                    .map(|i| F2Vector::unit(reg.dim(d), i))
                    .collect(),
            )
        })
        .collect();
    let (m, _) = reg.submodule(&basis, format!("I({})", alg.name()))?;
    Ok(m)
}

/// Free module on the given `(degree, label)` generators, keyed for lookup:
/// returns the module and, per degree, the `(generator, algebra basis index)`
/// behind each basis vector.
pub fn free_labeled(
    alg: &Arc<SubAlgebra>,
    gens: &[(i32, String)],
    max_degree: Option<i32>,
) -> (GradedModule, BTreeMap<i32, Vec<(usize, usize)>>) {
    let degs: Vec<i32> = gens.iter().map(|g| g.0).collect();
    let free = GradedModule::free(alg, &degs, max_degree);
    let mut index: BTreeMap<i32, Vec<(usize, usize)>> = BTreeMap::new();
    let mut labels: BTreeMap<i32, Vec<String>> = BTreeMap::new();
    let top = alg.top_degree() as i32;
    for d in free.degrees() {
        for (i, (gd, gl)) in gens.iter().enumerate() {
            if d < *gd || d > gd + top {
                continue;
            }
            for &b in alg.in_degree((d - gd) as u32) {
                index.entry(d).or_default().push((i, b));
                let w = word_label(alg, b);
                labels.entry(d).or_default().push(if w == "1" {
                    gl.clone()
                } else {
                    format!("{w}.{gl}")
                });
            }
        }
    }
    let relabeled = GradedModule::from_parts(free.name(), alg.clone(), labels, |g, d| {
        free.gen_action(g, d)
    })
    .unwrap();
    (relabeled, index)
}

/// `a ⊗_b m` for `b ⊆ a`.
pub fn induce(a: &Arc<SubAlgebra>, m: &GradedModule) -> Result<GradedModule> {
    let b = m.algebra().clone();
    let bgens: Vec<SteenrodElt> = b
        .generators()
        .iter()
        .map(|g| g.in_ambient(Some(a.ambient_n())))
        .collect::<Result<_>>()?;
    if bgens.iter().any(|g| !a.contains(g)) {
        return Err(Error::NotSubalgebra(format!("{b} is not contained in {a}")));
    }
    let mut gens = Vec::new();
    let mut start: BTreeMap<i32, usize> = BTreeMap::new();
    for d in m.degrees() {
        start.insert(d, gens.len());
        gens.extend(m.labels(d).iter().map(|l| (d, l.clone())));
    }
    let (free, index) = free_labeled(a, &gens, None);
    let locate = |d: i32, gen: usize, elt: usize| -> usize {
        index[&d]
            .iter()
            .position(|&x| x == (gen, elt))
            .expect("free basis vector exists")
    };
    let unit = a.in_degree(0)[0];
    let mut rels = Vec::new();
    for (bi, y) in bgens.iter().enumerate() {
        let k = b.gen_degree(bi) as i32;
        for d in m.degrees() {
            let act = m.gen_action(bi, d);
            for v in 0..m.dim(d) {
                let e = d + k;
                if free.dim(e) == 0 {
                    continue;
                }
                // y·e_v
                let mut vec = F2Vector::zeros(free.dim(e));
                let gv = start[&d] + v;
                let g_pos = locate(d, gv, unit);
                let yv = free
                    .act_elt(y, d)?
                    .mul_vec(&F2Vector::unit(free.dim(d), g_pos));
                vec.add_assign(&yv);
                // minus the generators of y·v
                for w in act.column(v).ones() {
                    vec.flip(locate(e, start[&e] + w, unit));
                }
                rels.push((e, vec));
            }
        }
    }
    let sub = free.generated_submodule(&rels);
    Ok(free
        .quotient(&sub, format!("{}({})", a.name(), m.name()))?
        .0)
}

/// The underlying module over a subalgebra `b` of `m`'s algebra.
pub fn restrict(m: &GradedModule, b: &Arc<SubAlgebra>) -> Result<GradedModule> {
    let a = m.algebra();
    let bgens: Vec<SteenrodElt> = b
        .generators()
        .iter()
        .map(|g| g.in_ambient(Some(a.ambient_n())))
        .collect::<Result<_>>()?;
    if bgens.iter().any(|g| !a.contains(g)) {
        return Err(Error::NotSubalgebra(format!("{b} is not contained in {a}")));
    }
    let mut err = None;
    let out = GradedModule::from_parts(
        format!("{}|{}", m.name(), b.name()),
        b.clone(),
        m.basis_map(),
        |g, d| match m.act_elt(&bgens[g], d) {
            Ok(x) => x,
            Err(e) => {
                err = Some(e);
                F2Matrix::zeros(m.dim(d + b.gen_degree(g) as i32), m.dim(d))
            }
        },
    )?;
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// Pull a module over A(k) back along the grade-halving map A(k+1) -> A(k):
/// degrees double, `Sq^{2^{i+1}}` acts as the old `Sq^{2^i}` and `Sq^1` as zero.
pub fn double(m: &GradedModule) -> Result<GradedModule> {
    let alg = m.algebra();
    let amb = Some(alg.ambient_n());
    let k = alg.num_gens() as u32 - 1;
    let is_a = (0..=k)
        .all(|i| SteenrodElt::sq(1 << i, amb).ok().as_ref() == Some(&alg.generators()[i as usize]));
    if !is_a {
        return Err(Error::Unsupported(format!(
            "doubling needs a module over some A(k), not {alg}"
        )));
    }
    let target = SubAlgebra::a(k + 1)?;
    let basis: BTreeMap<i32, Vec<String>> =
        m.basis_map().into_iter().map(|(d, v)| (2 * d, v)).collect();
    let name = format!("double({})", m.name());
    GradedModule::from_parts(name, target.clone(), basis, |g, d| {
        if g == 0 {
            F2Matrix::zeros(0, m.dim(d / 2))
        } else {
            m.gen_action(g - 1, d / 2)
        }
    })
}
