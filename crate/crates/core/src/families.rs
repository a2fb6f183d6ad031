//! Homology actions of the model periodic maps on the x-basis.
//!
//! On `H_1(F_g; Z_2)` the classes `x_1..x_{2g+1}` satisfy
//! `x_{2g+1} = x_1 + ... + x_{2g}` and pair to 1 whenever distinct.
//! - `tau`: `x_1 -> x_2 -> ... -> x_{2g} -> x_{2g+1} -> x_1` (surface order `2g+1`)
//! - `v`: `x_1 -> x_2 -> ... -> x_{2g} -> x_1` over Z_2; the order-`4g`
//!   rotation's signs vanish mod 2, so the homology order is `2g`
//! - `eta`: acts by `-1`, hence the identity mod 2 (surface order 2)
//! - `wiman`: `eta ∘ tau^{g+1}`, equal to `tau^{g+1}` on homology (surface order `4g+2`)

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gf2::{Gf2Vector, HomologyMap, IntersectionForm};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    Tau,
    V,
    Eta,
    Wiman,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 4] = [
        FamilyKind::Tau,
        FamilyKind::V,
        FamilyKind::Eta,
        FamilyKind::Wiman,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::Tau => "tau",
            FamilyKind::V => "v",
            FamilyKind::Eta => "eta",
            FamilyKind::Wiman => "wiman",
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "tau" => Ok(FamilyKind::Tau),
            "v" => Ok(FamilyKind::V),
            "eta" => Ok(FamilyKind::Eta),
            "wiman" => Ok(FamilyKind::Wiman),
            other => Err(format!(
                "unknown family {other:?} (expected tau, v, eta or wiman)"
            )),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FamilyId {
    pub kind: FamilyKind,
    pub genus: usize,
}

impl FamilyId {
    pub fn new(kind: FamilyKind, genus: usize) -> Result<Self> {
        if genus == 0 {
            return Err(Error::ZeroGenus);
        }
        Ok(Self { kind, genus })
    }

    pub fn build(self) -> Result<HomologyMap> {
        family_map(self.kind, self.genus)
    }

    /// Order of the map on the surface. Metadata only; never computed.
    pub fn surface_order(self) -> u64 {
        let g = self.genus as u64;
        match self.kind {
            FamilyKind::Tau => 2 * g + 1,
            FamilyKind::V => 4 * g,
            FamilyKind::Eta => 2,
            FamilyKind::Wiman => 4 * g + 2,
        }
    }
}

fn standard(genus: usize) -> Result<Arc<IntersectionForm>> {
    Ok(Arc::new(IntersectionForm::standard(genus)?))
}

pub fn family_map(kind: FamilyKind, genus: usize) -> Result<HomologyMap> {
    match kind {
        FamilyKind::Tau => tau(genus),
        FamilyKind::V => v(genus),
        FamilyKind::Eta => eta(genus),
        FamilyKind::Wiman => wiman(genus),
    }
}

pub fn tau(genus: usize) -> Result<HomologyMap> {
    let form = standard(genus)?;
    let n = 2 * genus;
    let images = (0..n)
        .map(|i| {
            if i + 1 < n {
                Gf2Vector::basis(genus, i + 1)
            } else {
                Gf2Vector::all_ones(genus)
            }
        })
        .collect();
    Ok(HomologyMap::new_unchecked(form, images))
}

pub fn v(genus: usize) -> Result<HomologyMap> {
    let form = standard(genus)?;
    let n = 2 * genus;
    let images = (0..n)
        .map(|i| Gf2Vector::basis(genus, (i + 1) % n))
        .collect();
    Ok(HomologyMap::new_unchecked(form, images))
}

pub fn eta(genus: usize) -> Result<HomologyMap> {
    Ok(HomologyMap::identity(standard(genus)?))
}

pub fn wiman(genus: usize) -> Result<HomologyMap> {
    eta(genus)?.compose(&tau(genus)?.power(genus as u64 + 1))
}
