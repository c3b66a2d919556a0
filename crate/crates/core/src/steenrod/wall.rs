//! Wall's relations among the generators `Sq^{2^k}` of A(n).

use std::fmt;

use super::algebra::SubAlgebra;
use super::element::SteenrodElt;
use crate::error::Result;

/// A relation as a sum of words in the `Sq^{2^k}`; a word stores the
/// exponents `k`, leftmost factor first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WallRelation {
    pub label: String,
    pub words: Vec<Vec<u32>>,
}

impl WallRelation {
    /// The value of the relation in A(n); zero for every relation returned by
    /// [`wall_relations`].
    pub fn evaluate(&self, n: u32) -> Result<SteenrodElt> {
        let amb = Some(n);
        let mut acc = SteenrodElt::zero(amb);
        for w in &self.words {
            let factors: Vec<SteenrodElt> = w
                .iter()
                .map(|&k| SteenrodElt::sq(1 << k, amb))
                .collect::<Result<_>>()?;
            acc = acc.add(&SteenrodElt::product(&factors, amb)?)?;
        }
        Ok(acc)
    }

    pub fn max_generator(&self) -> u32 {
        self.words.iter().flatten().copied().max().unwrap_or(0)
    }
}

pub fn word_text(w: &[u32]) -> String {
    w.iter().map(|&k| format!("Sq^{}", 1u32 << k)).collect()
}

impl fmt::Display for WallRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.words.iter().map(|w| word_text(w)).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

fn xor_push(words: &mut Vec<Vec<u32>>, w: Vec<u32>) {
    if let Some(i) = words.iter().position(|x| *x == w) {
        words.remove(i);
    } else {
        words.push(w);
    }
}

fn contains_factor(w: &[u32], f: &[u32]) -> bool {
    w.windows(f.len()).any(|x| x == f)
}

/// The relations for A(n), in the order Sq^1Sq^1, then for t = 1..n the
/// relation for Sq^{2^t}Sq^{2^t} followed by the commutators of Sq^{2^t}
/// with Sq^{2^s}, s <= t-2. Correction terms are the breadth-first word
/// expressions of the corresponding elements of A(t-1); words containing an
/// earlier one-word relation as a factor are dropped.
pub fn wall_relations(n: u32) -> Result<Vec<WallRelation>> {
    let amb = Some(n);
    let sq = |k: u32| SteenrodElt::sq(1 << k, amb);
    let value = |words: &[Vec<u32>]| -> Result<SteenrodElt> {
        WallRelation {
            label: String::new(),
            words: words.to_vec(),
        }
        .evaluate(n)
    };
    let mut out = vec![WallRelation {
        label: "Sq^1Sq^1".into(),
        words: vec![vec![0, 0]],
    }];
    for t in 1..=n {
        let lower = SubAlgebra::a_in(t - 1, n)?;
        let mut words = vec![vec![t, t], vec![t - 1, t, t - 1], vec![t - 1, t - 1, t]];
        let phi = value(&words)?;
        for w in lower.expression(&phi)? {
            xor_push(&mut words, w.into_iter().map(|g| g as u32).collect());
        }
        out.push(WallRelation {
            label: format!("phi({t})"),
            words,
        });
        for s in 0..t.saturating_sub(1) {
            let mut words = vec![vec![t, s], vec![s, t]];
            let theta = sq(t)?.mul(&sq(s)?)?.add(&sq(s)?.mul(&sq(t)?)?)?;
            for w in lower.expression(&theta)? {
                xor_push(&mut words, w.into_iter().map(|g| g as u32).collect());
            }
            out.push(WallRelation {
                label: format!("theta({t},{s})"),
                words,
            });
        }
    }
    let monomials: Vec<Vec<u32>> = out
        .iter()
        .filter(|r| r.words.len() == 1)
        .map(|r| r.words[0].clone())
        .collect();
    for r in out.iter_mut() {
        if r.words.len() > 1 {
            r.words
                .retain(|w| !monomials.iter().any(|m| contains_factor(w, m)));
        }
    }
    Ok(out)
}
