use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use super::milnor::{antipode_basis, coproduct_basis, milnor_product, toggle, MilnorBasisElt};
use crate::error::{Error, Result};

/// An F_2-linear combination of Milnor basis elements.
///
/// `ambient` is `Some(n)` when the element is known to lie in A(n) and `None`
/// for an element of the full Steenrod algebra.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SteenrodElt {
    ambient: Option<u32>,
    terms: BTreeSet<MilnorBasisElt>,
}

impl SteenrodElt {
    pub fn zero(ambient: Option<u32>) -> Self {
        SteenrodElt {
            ambient,
            terms: BTreeSet::new(),
        }
    }

    pub fn one(ambient: Option<u32>) -> Self {
        Self::from_basis(MilnorBasisElt::unit(), ambient).expect("unit lies in every A(n)")
    }

    pub fn from_basis(b: MilnorBasisElt, ambient: Option<u32>) -> Result<Self> {
        Self::from_terms([b], ambient)
    }

    pub fn from_terms(
        terms: impl IntoIterator<Item = MilnorBasisElt>,
        ambient: Option<u32>,
    ) -> Result<Self> {
        let mut set = BTreeSet::new();
        for t in terms {
            toggle(&mut set, t);
        }
        if let Some(n) = ambient {
            if let Some(bad) = set.iter().find(|t| !t.in_profile(n)) {
                return Err(Error::OutOfAmbient(format!("{bad} is not in A({n})")));
            }
        }
        Ok(SteenrodElt {
            ambient,
            terms: set,
        })
    }

    /// `Sq^k` tagged with the given ambient.
    pub fn sq(k: u32, ambient: Option<u32>) -> Result<Self> {
        Self::from_basis(MilnorBasisElt::sq(k), ambient)
    }

    pub fn ambient(&self) -> Option<u32> {
        self.ambient
    }

    /// Re-tag into A(n), checking that every term fits the profile.
    pub fn in_ambient(&self, n: Option<u32>) -> Result<Self> {
        Self::from_terms(self.terms.iter().cloned(), n)
    }

    pub fn terms(&self) -> &BTreeSet<MilnorBasisElt> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The common degree of the terms; `None` for zero or inhomogeneous elements.
    pub fn degree(&self) -> Option<u32> {
        let mut it = self.terms.iter().map(|t| t.degree());
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.degree().is_some()
    }

    /// Split into homogeneous components, keyed by degree.
    pub fn components(&self) -> BTreeMap<u32, SteenrodElt> {
        let mut out: BTreeMap<u32, SteenrodElt> = BTreeMap::new();
        for t in &self.terms {
            out.entry(t.degree())
                .or_insert_with(|| SteenrodElt::zero(self.ambient))
                .terms
                .insert(t.clone());
        }
        out
    }

    fn check_ambient(&self, other: &SteenrodElt) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch(self.ambient, other.ambient));
        }
        Ok(())
    }

    pub fn add(&self, other: &SteenrodElt) -> Result<SteenrodElt> {
        self.check_ambient(other)?;
        let mut out = self.clone();
        for t in &other.terms {
            toggle(&mut out.terms, t.clone());
        }
        Ok(out)
    }

    pub fn mul(&self, other: &SteenrodElt) -> Result<SteenrodElt> {
        self.check_ambient(other)?;
        let mut out = BTreeSet::new();
        for a in &self.terms {
            for b in &other.terms {
                for p in milnor_product(a, b) {
                    toggle(&mut out, p);
                }
            }
        }
        if let Some(n) = self.ambient {
            assert!(
                out.iter().all(|t| t.in_profile(n)),
                "A({n}) is not closed under the product"
            );
        }
        Ok(SteenrodElt {
            ambient: self.ambient,
            terms: out,
        })
    }

    /// Product of a sequence of elements, left to right.
    pub fn product<'a>(
        factors: impl IntoIterator<Item = &'a SteenrodElt>,
        ambient: Option<u32>,
    ) -> Result<SteenrodElt> {
        let mut acc = SteenrodElt::one(ambient);
        for f in factors {
            acc = acc.mul(f)?;
        }
        Ok(acc)
    }

    /// The coproduct as a sum of tensors of basis elements; pairs that occur
    /// an even number of times cancel.
    pub fn coproduct(&self) -> Vec<(SteenrodElt, SteenrodElt)> {
        let mut pairs: BTreeSet<(MilnorBasisElt, MilnorBasisElt)> = BTreeSet::new();
        for t in &self.terms {
            for p in coproduct_basis(t) {
                if !pairs.remove(&p) {
                    pairs.insert(p);
                }
            }
        }
        pairs
            .into_iter()
            .map(|(l, r)| {
                (
                    SteenrodElt {
                        ambient: self.ambient,
                        terms: BTreeSet::from([l]),
                    },
                    SteenrodElt {
                        ambient: self.ambient,
                        terms: BTreeSet::from([r]),
                    },
                )
            })
            .collect()
    }

    pub fn antipode(&self) -> SteenrodElt {
        let mut memo = HashMap::new();
        let mut out = BTreeSet::new();
        for t in &self.terms {
            for c in antipode_basis(t, &mut memo) {
                toggle(&mut out, c);
            }
        }
        SteenrodElt {
            ambient: self.ambient,
            terms: out,
        }
    }

    /// The augmentation: the coefficient of the unit.
    pub fn counit(&self) -> bool {
        self.terms.contains(&MilnorBasisElt::unit())
    }
}

impl fmt::Display for SteenrodElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|t| t.to_string()).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for SteenrodElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The primitive P_1^s, built by the recursion
/// P_1^0 = Sq^1, P_1^s = Sq^{2^s} P_1^{s-1} + P_1^{s-1} Sq^{2^s}.
pub fn milnor_primitive(s: u32, ambient: u32) -> Result<SteenrodElt> {
    if s > ambient {
        return Err(Error::OutOfAmbient(format!(
            "P(1,{s}) is not in A({ambient})"
        )));
    }
    let amb = Some(ambient);
    let mut p = SteenrodElt::sq(1, amb)?;
    for k in 1..=s {
        let g = SteenrodElt::sq(1 << k, amb)?;
        p = g.mul(&p)?.add(&p.mul(&g)?)?;
    }
    Ok(p)
}

/// Where the grade-halving map A(n) -> A(n-1) sends `Sq^k`: `Sq^{k/2}` for
/// even `k`, zero otherwise.
pub fn double_pushforward(k: u32) -> Option<u32> {
    k.is_multiple_of(2).then_some(k / 2)
}
