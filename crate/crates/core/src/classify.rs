//! Complete intersection distributions by curves on `P^4` and `P^5` whose
//! singular scheme is singular and not of general type.

use crate::chow::SplitBundle;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassificationEntry {
    pub n: usize,
    pub degree: i64,
    pub pfaff_twists: &'static [i64],
    pub sing_description: &'static str,
}

impl ClassificationEntry {
    pub fn pfaff_bundle(&self) -> SplitBundle {
        SplitBundle::new(self.n, self.pfaff_twists.to_vec()).expect("table twists are valid")
    }

    /// `O(-2)^3 / smooth projected Veronese surface`.
    pub fn line(&self) -> String {
        format!("{} / {}", self.pfaff_bundle(), self.sing_description)
    }
}

pub const TABLE: [ClassificationEntry; 4] = [
    ClassificationEntry {
        n: 4,
        degree: 2,
        pfaff_twists: &[-2, -2, -2],
        sing_description: "smooth projected Veronese surface",
    },
    ClassificationEntry {
        n: 4,
        degree: 3,
        pfaff_twists: &[-2, -2, -3],
        sing_description: "K3 surface of genus 7",
    },
    ClassificationEntry {
        n: 5,
        degree: 3,
        pfaff_twists: &[-2, -2, -2, -2],
        sing_description: "a scroll over a plane cubic surface",
    },
    ClassificationEntry {
        n: 5,
        degree: 4,
        pfaff_twists: &[-2, -2, -2, -3],
        sing_description: "P(R_2) ∩ Bl_{P^2}P^8",
    },
];

pub fn classify(n: usize, degree: i64) -> Result<&'static ClassificationEntry> {
    TABLE.iter().find(|e| e.n == n && e.degree == degree).ok_or_else(|| {
        Error::InvalidInput(format!(
            "no singular, nongeneral-type complete intersection distribution with n = {n}, degree {degree}"
        ))
    })
}
