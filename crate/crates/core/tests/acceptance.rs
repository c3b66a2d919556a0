//! One pass/fail line per acceptance criterion. Criteria listed in `KNOWN`
//! are reported but do not fail the run.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::Arc;

use common::{hom_complex_ext, props};
use stmod::fpmod::*;
use stmod::resolve::*;
use stmod::rootspin::*;
use stmod::steenrod::syntax::parse_element;
use stmod::steenrod::{wall_relations, SteenrodElt, SubAlgebra};

type Outcome = Result<(), String>;
type Criterion = (u32, &'static str, fn() -> Outcome);

/// Criteria that cannot hold as stated, with the reason printed on failure.
const KNOWN: &[(u32, &str)] = &[(
    12,
    "P(1,1) is central in A(1), so it acts trivially on A(1)//F2(P(1,1)); \
     the stated decompositions contradict this",
)];

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn a(n: u32) -> Arc<SubAlgebra> {
    SubAlgebra::a(n).unwrap()
}

fn p11() -> Arc<SubAlgebra> {
    SubAlgebra::closure(&[parse_element("P(1,1)", Some(1)).unwrap()], 1).unwrap()
}

fn f2(alg: &Arc<SubAlgebra>) -> GradedModule {
    GradedModule::trivial(alg.clone())
}

fn fixture(name: &str) -> GradedModule {
    Library::shipped().module(name).unwrap().as_ref().clone()
}

fn iso(x: &GradedModule, y: &GradedModule) -> bool {
    matches!(iso_test(x, y), Ok(IsoOutcome::Isomorphic(_)))
}

fn sum(alg: &Arc<SubAlgebra>, parts: &[&GradedModule]) -> GradedModule {
    GradedModule::direct_sum("sum", alg, parts).unwrap()
}

fn ac1() -> Outcome {
    for (n, d) in [(0, 2), (1, 8), (2, 64)] {
        ensure!(a(n).dim() == d, "dim A({n}) = {}", a(n).dim());
    }
    for n in 1..=2 {
        for r in wall_relations(n).unwrap() {
            ensure!(
                r.evaluate(n).unwrap().is_zero(),
                "{} is nonzero in A({n})",
                r.label
            );
        }
    }
    Ok(())
}

fn ac2() -> Outcome {
    let sq = |k| SteenrodElt::sq(k, Some(2)).unwrap();
    let lhs = sq(2).mul(&sq(3)).unwrap();
    let rhs = sq(4)
        .mul(&sq(1))
        .unwrap()
        .add(&sq(1).mul(&sq(4)).unwrap())
        .unwrap();
    ensure!(lhs == rhs, "Sq2 Sq3 = {lhs}, Sq4 Sq1 + Sq1 Sq4 = {rhs}");
    Ok(())
}

fn ac3() -> Outcome {
    for (name, shift) in [
        ("A1", 6),
        ("HZ", 5),
        ("kU", 2),
        ("Joker", 0),
        ("A1modSq2P11", 1),
        ("SO8modSp2", 18),
    ] {
        let got = selfdual_shift(&fixture(name), false).unwrap();
        ensure!(got == Some(shift), "{name}: shift {got:?}, want {shift}");
    }
    let a1 = a(1);
    let a2 = a(2);
    let pairs = [
        (a1.clone(), SubAlgebra::a_in(0, 1).unwrap()),
        (a1.clone(), SubAlgebra::e_in(1, 1).unwrap()),
        (a1.clone(), p11()),
        (a2.clone(), SubAlgebra::a_in(1, 2).unwrap()),
        (a2.clone(), SubAlgebra::e_in(2, 2).unwrap()),
    ];
    for (h, k) in pairs {
        let want = h.top_degree() as i32 - k.top_degree() as i32;
        let got = selfdual_shift(&hopf_quotient(&h, &k).unwrap(), false).unwrap();
        ensure!(
            got == Some(want),
            "{}//{}: shift {got:?}, want {want}",
            h.name(),
            k.name()
        );
    }
    Ok(())
}

fn ac4() -> Outcome {
    let a1 = a(1);
    let k = SubAlgebra::closure(&[parse_element("Sq^2", Some(1)).unwrap()], 1).unwrap();
    let q = induce(&a1, &f2(&k)).unwrap();
    ensure!(
        iso(
            &q,
            &quotient_by_left_ideal(&a1, &[parse_element("Sq^2", Some(1)).unwrap()]).unwrap()
        ),
        "induced module is not A(1)/A(1)Sq2"
    );
    for m in [
        q,
        fixture("QuestionMark"),
        fixture("UpsideDownQuestionMark"),
    ] {
        let d = m.min_degree().unwrap() + m.max_degree().unwrap();
        match iso_test(&dual(&m).unwrap(), &m.suspend(-d)).unwrap() {
            IsoOutcome::NotIsomorphic(_) => {}
            other => {
                return Err(format!(
                    "{}: iso_test at shift {d} gave {}",
                    m.name(),
                    other.is_iso()
                ))
            }
        }
        ensure!(
            selfdual_shift(&m, false).unwrap().is_none(),
            "{} is self-dual",
            m.name()
        );
    }
    Ok(())
}

fn ac5() -> Outcome {
    let j = fixture("Joker");
    let r = reduce(&tensor(&j, &j).unwrap()).unwrap();
    let mut free = r.free_part.clone();
    free.sort();
    ensure!(free == vec![-4, -3, -2], "free summands at {free:?}");
    ensure!(iso(&r.reduced, &f2(&a(1))), "reduced part is not F2");
    ensure!(r.witness.is_bijective(), "splitting map is not bijective");
    Ok(())
}

fn ac6() -> Outcome {
    let hz = fixture("HZ");
    let a1 = a(1);
    let reg = GradedModule::regular(&a1).as_ref().clone();
    let hzhz = tensor(&hz, &hz).unwrap();
    ensure!(
        iso(&hzhz, &sum(&a1, &[&hz, &reg.suspend(2), &hz.suspend(5)])),
        "HZ (x) HZ decomposition fails"
    );
    let r = reduce(&hzhz).unwrap();
    ensure!(r.free_part == vec![2], "free part {:?}", r.free_part);
    ensure!(
        iso(&r.reduced, &sum(&a1, &[&hz, &hz.suspend(5)])),
        "reduced part is not HZ + HZ[5]"
    );
    Ok(())
}

fn ac7() -> Outcome {
    let j = fixture("Joker");
    let l = loop_module(&j).unwrap();
    let o = oloop_module(&j).unwrap();
    let l2 = loop_module(&l).unwrap();
    let o2 = oloop_module(&o).unwrap();
    for (name, m, want) in [
        ("loop", &l, vec![1, 3, 4]),
        ("inverse loop", &o, vec![-4, -3, -1]),
        ("double loop", &l2, vec![2, 4, 5, 6, 7]),
        ("double inverse loop", &o2, vec![-7, -6, -5, -4, -2]),
    ] {
        ensure!(m.degrees() == want, "{name}: degrees {:?}", m.degrees());
    }
    let back = reduce(&oloop_module(&l).unwrap()).unwrap().reduced;
    ensure!(
        iso(&back, &j),
        "inverse loop of loop is not stably the Joker"
    );
    Ok(())
}

fn ac8() -> Outcome {
    let a1 = a(1);
    let res = minimal_resolution(&f2(&a1), 13, 24).unwrap();
    ensure!(
        res.minimality_failure().is_none(),
        "resolution is not minimal"
    );
    let chart = chart_of(&res);
    for s in 0..=12 {
        ensure!(chart.get(s, s as i32) >= 1, "no class at ({s},{s})");
    }
    ensure!(
        chart.get(4, 12) == 1,
        "Ext^(4,12) has dimension {}",
        chart.get(4, 12)
    );
    let oracle = hom_complex_ext(&res, &f2(&a1), 12, 0, 24);
    let mut trimmed = chart.clone();
    trimmed.entries.retain(|k, _| k.0 <= 12);
    ensure!(
        trimmed.entries == oracle.entries,
        "chart differs from the Hom-complex oracle"
    );

    let m = hopf_quotient(&a1, &p11()).unwrap();
    let c = ext_chart(&m, 8, 28).unwrap();
    for s in 0..=8usize {
        for t in s as i32..=s as i32 + 20 {
            let want = usize::from(t == 3 * s as i32);
            ensure!(
                c.get(s, t) == want,
                "A(1)//F2(P(1,1)) at ({s},{t}): {}",
                c.get(s, t)
            );
        }
    }

    let cf = ext_chart(&f2(&a1), 9, 24).unwrap();
    let ci = ext_chart(&augmentation_ideal(&a1).unwrap(), 8, 24).unwrap();
    let cd = ext_chart(&dual(&augmentation_ideal(&a1).unwrap()).unwrap(), 8, 24).unwrap();
    for s in 0..=8usize {
        for t in -6..=24 {
            ensure!(ci.get(s, t) == cf.get(s + 1, t), "ideal at ({s},{t})");
            if s >= 1 {
                ensure!(cd.get(s, t) == cf.get(s - 1, t), "dual ideal at ({s},{t})");
            }
        }
    }
    let bottom: Vec<_> = cd
        .entries
        .iter()
        .filter(|(k, _)| k.0 == 0)
        .map(|(k, v)| (k.1, *v))
        .collect();
    ensure!(
        bottom == vec![(-6, 1)],
        "dual ideal in filtration 0: {bottom:?}"
    );
    Ok(())
}

fn ac9() -> Outcome {
    let a1 = a(1);
    for k in [
        SubAlgebra::a_in(0, 1).unwrap(),
        SubAlgebra::e_in(1, 1).unwrap(),
        p11(),
    ] {
        let shift = a1.top_degree() as i32 - k.top_degree() as i32;
        let coeff = tensor(&hopf_quotient(&a1, &k).unwrap(), &f2(&a1)).unwrap();
        let t_max = 16;
        let over_h = ext_groups(&f2(&a1), &coeff, 6, t_max).unwrap();
        let over_k = ext_chart(&f2(&k), 6, t_max + shift).unwrap();
        for s in 0..=6 {
            for t in -shift..=t_max {
                ensure!(
                    over_h.get(s, t) == over_k.get(s, t + shift),
                    "{}: ({s},{t}) gives {} over A(1), {} over the subalgebra",
                    k.name(),
                    over_h.get(s, t),
                    over_k.get(s, t + shift)
                );
            }
        }
    }
    Ok(())
}

fn ac10() -> Outcome {
    check_exact(&bott_sequence().unwrap()).map_err(|f| format!("Bott sequence: {f:?}"))?;
    check_exact(&p11_resolution(8).unwrap()).map_err(|f| format!("periodic resolution: {f:?}"))?;
    Ok(())
}

fn ac11() -> Outcome {
    let a0 = GradedModule::regular(&a(0)).as_ref().clone();
    let d0 = double(&a0).unwrap();
    ensure!(
        d0.degrees() == vec![0, 2],
        "double(A(0)) degrees {:?}",
        d0.degrees()
    );
    ensure!(
        iso(
            &d0,
            &hopf_quotient(&a(1), &SubAlgebra::e_in(1, 1).unwrap()).unwrap()
        ),
        "double(A(0)) is not A(1)//E(1)"
    );
    let a1 = GradedModule::regular(&a(1)).as_ref().clone();
    let d1 = double(&a1).unwrap();
    let doubled: Vec<i32> = a1.degrees().iter().map(|d| 2 * d).collect();
    ensure!(
        d1.degrees() == doubled,
        "double(A(1)) degrees {:?}",
        d1.degrees()
    );
    ensure!(
        iso(
            &d1,
            &hopf_quotient(&a(2), &SubAlgebra::e_in(2, 2).unwrap()).unwrap()
        ),
        "double(A(1)) is not A(2)//E(2)"
    );
    Ok(())
}

fn ac12() -> Outcome {
    let a1 = a(1);
    let k = p11();
    let m = hopf_quotient(&a1, &k).unwrap();
    let r = restrict(&m, &k).unwrap();
    let free_k = GradedModule::regular(&k).as_ref().clone();
    let triv = f2(&k);
    let claimed = sum(&k, &[&free_k, &triv.suspend(1), &triv.suspend(2)]);
    let p = k.generators()[0].clone();
    let acts_trivially = r
        .degrees()
        .iter()
        .all(|&d| r.act_elt(&p, d).unwrap().is_zero());
    ensure!(
        iso(&r, &claimed),
        "the restriction is {} (P(1,1) acts {}), not the claimed free-plus-trivial sum",
        if acts_trivially {
            "F2 + F2[1] + F2[2] + F2[3]"
        } else {
            "a different module"
        },
        if acts_trivially {
            "as zero"
        } else {
            "nontrivially"
        }
    );
    let ind = induce(&a1, &r).unwrap();
    let reg = GradedModule::regular(&a1).as_ref().clone();
    let claimed = sum(&a1, &[&reg, &m.suspend(1), &m.suspend(2)]);
    ensure!(
        iso(&ind, &claimed),
        "induced module is not A(1) + M[1] + M[2]"
    );
    Ok(())
}

fn ac13() -> Outcome {
    let rs = |s: &str| s.parse::<RootSystem>().unwrap();
    let adj = |s: &str| adjoint_spin(&GroupForm::adjoint(rs(s)));
    let q = |v: &[i64]| v.iter().map(|&x| Q::from(x)).collect::<Vec<_>>();
    let g2 = adj("G2");
    ensure!(
        g2.in_lattice && g2.rho == q(&[5, 3]),
        "G2: {}",
        g2.verdict()
    );
    let f4 = adj("F4");
    ensure!(
        f4.in_lattice && f4.rho == q(&[8, 15, 21, 11]),
        "F4: {}",
        f4.verdict()
    );
    ensure!(adj("E6").in_lattice, "E6 adjoint");
    let e7 = adj("E7");
    ensure!(
        !e7.in_lattice && e7.certificate == SpinCertificate::NonIntegral(2, Q::new(49, 2)),
        "E7: {}",
        e7.verdict()
    );
    ensure!(adj("E8").in_lattice, "E8 adjoint");
    for n in 1..=8 {
        ensure!(
            adj(&format!("A{n}")).in_lattice == (n % 2 == 0),
            "A{n} adjoint"
        );
    }
    for n in 2..=8 {
        ensure!(!adj(&format!("B{n}")).in_lattice, "B{n} adjoint");
    }
    for n in 1..=9 {
        ensure!(
            u_n_adjoint_spin(n).unwrap().in_lattice == (n % 2 == 1),
            "U({n})"
        );
    }
    for (name, det) in [("G2", 1), ("F4", 1), ("E6", 3), ("E7", 2), ("E8", 1)] {
        ensure!(rs(name).cartan_determinant() == det, "det {name}");
    }
    for n in 1..=8 {
        ensure!(
            rs(&format!("A{n}")).cartan_determinant() == n as i64 + 1,
            "det A{n}"
        );
    }
    Ok(())
}

fn ac14() -> Outcome {
    props::dual_involution()?;
    props::tensor_laws(14, 12)?;
    props::reduce_idempotent()?;
    props::margolis_detects_freeness()?;
    props::rref_kernel_oracle(14, 200)?;
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 14] = [
        (1, "algebra dimensions and Wall relations", ac1),
        (2, "Sq2 Sq3 = Sq4 Sq1 + Sq1 Sq4 in A(2)", ac2),
        (3, "self-duality shifts", ac3),
        (4, "question mark is not self-dual", ac4),
        (5, "Joker squared is F2 plus free", ac5),
        (6, "HZ squared decomposition", ac6),
        (7, "loops of the Joker", ac7),
        (8, "Ext charts and shift identities", ac8),
        (9, "change of rings", ac9),
        (10, "exactness of the Bott and periodic sequences", ac10),
        (11, "doubling", ac11),
        (12, "restriction and induction for A(1)//F2(P(1,1))", ac12),
        (13, "Spin verdicts and Cartan determinants", ac13),
        (14, "seeded property suites", ac14),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut unexpected = 0;
    for (n, what, f) in criteria {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let known = KNOWN.iter().find(|k| k.0 == n);
        match (outcome, known) {
            (Ok(()), _) => println!("[PASS] AC {n:>2} {what}"),
            (Err(e), Some((_, why))) => println!("[FAIL] AC {n:>2} {what}: {e} (known: {why})"),
            (Err(e), None) => {
                unexpected += 1;
                println!("[FAIL] AC {n:>2} {what}: {e}");
            }
        }
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
