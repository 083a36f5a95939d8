//! Problem instances: a circle collection, knapsack geometry, and optional
//! linear side constraints on the selection variables.

use crate::geometry::{Bin, Circle};
use crate::rat::Rat;
use crate::{Error, Result};
use num_traits::Signed;
use std::collections::HashMap;

/// One linear side constraint `sum a_i z_i <= rhs` over selection counts,
/// with nonnegative coefficients and right-hand side.
#[derive(Debug, Clone)]
pub struct SideConstraint {
    /// Coefficients keyed by item id; absent items have coefficient zero.
    pub coeffs: Vec<(String, Rat)>,
    pub rhs: Rat,
}

impl SideConstraint {
    /// Ids with a strictly positive coefficient.
    pub fn touched_ids(&self) -> impl Iterator<Item = &str> {
        self.coeffs
            .iter()
            .filter(|(_, a)| a.is_positive())
            .map(|(id, _)| id.as_str())
    }
}

/// A packing problem instance. `m` is the knapsack count for the knapsack
/// variants and is ignored by bin packing.
#[derive(Debug, Clone)]
pub struct Instance {
    pub bin: Bin,
    pub m: u64,
    pub circles: Vec<Circle>,
    pub constraints: Vec<SideConstraint>,
}

impl Instance {
    /// Validates structural invariants: positive bin normalized to
    /// `width <= height`, unique ids, positive diameters no wider than the
    /// bin, nonnegative profits, positive multiplicities, and side
    /// constraints with known ids and nonnegative data.
    pub fn new(
        bin: Bin,
        m: u64,
        circles: Vec<Circle>,
        constraints: Vec<SideConstraint>,
    ) -> Result<Self> {
        if bin.width > bin.height {
            return Err(Error::Input(format!(
                "bin must satisfy width <= height, got {} x {}",
                crate::rat::format(&bin.width),
                crate::rat::format(&bin.height),
            )));
        }
        if m == 0 {
            return Err(Error::Input("knapsack count m must be >= 1".into()));
        }
        let mut seen = HashMap::new();
        for c in &circles {
            if !c.diameter.is_positive() {
                return Err(Error::Input(format!("circle {} has nonpositive diameter", c.id)));
            }
            if c.diameter > bin.width {
                return Err(Error::Input(format!(
                    "circle {} is wider than the bin ({} > {})",
                    c.id,
                    crate::rat::format(&c.diameter),
                    crate::rat::format(&bin.width),
                )));
            }
            if c.profit.is_negative() {
                return Err(Error::Input(format!("circle {} has negative profit", c.id)));
            }
            if c.multiplicity == 0 {
                return Err(Error::Input(format!("circle {} has zero multiplicity", c.id)));
            }
            if seen.insert(c.id.clone(), ()).is_some() {
                return Err(Error::Input(format!("duplicate circle id {}", c.id)));
            }
        }
        for (k, q) in constraints.iter().enumerate() {
            if q.rhs.is_negative() {
                return Err(Error::Input(format!("constraint {k} has negative rhs")));
            }
            for (id, a) in &q.coeffs {
                if a.is_negative() {
                    return Err(Error::Input(format!(
                        "constraint {k} has negative coefficient for {id}"
                    )));
                }
                if !seen.contains_key(id) {
                    return Err(Error::Input(format!(
                        "constraint {k} references unknown circle {id}"
                    )));
                }
            }
        }
        Ok(Self { bin, m, circles, constraints })
    }

    /// Lookup table from id to circle.
    pub fn table(&self) -> HashMap<&str, &Circle> {
        self.circles.iter().map(|c| (c.id.as_str(), c)).collect()
    }

    /// Total item area (all copies), using an upper rational bound on pi.
    pub fn total_area_hi(&self) -> Rat {
        let pi = crate::rat::pi_hi();
        self.circles
            .iter()
            .map(|c| {
                let r = c.radius();
                &pi * &r * &r * crate::rat::int(c.multiplicity as i64)
            })
            .sum()
    }

    /// Total profit over all copies.
    pub fn total_profit(&self) -> Rat {
        self.circles
            .iter()
            .map(|c| &c.profit * crate::rat::int(c.multiplicity as i64))
            .sum()
    }

    /// Number of distinct items (not copies).
    pub fn len(&self) -> usize {
        self.circles.len()
    }

    /// True when the instance has no circles.
    pub fn is_empty(&self) -> bool {
        self.circles.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, rat};

    fn circle(id: &str, d: Rat) -> Circle {
        Circle { id: id.into(), diameter: d, profit: int(1), multiplicity: 1 }
    }

    #[test]
    fn rejects_wide_circle_and_flat_bin() {
        let bin = Bin::new(int(2), int(4)).unwrap();
        let err = Instance::new(bin.clone(), 1, vec![circle("a", int(3))], vec![]);
        assert!(err.is_err());
        assert!(Bin::new(int(0), int(4)).is_err());
        assert!(Instance::new(Bin::new(int(4), int(2)).unwrap(), 1, vec![], vec![]).is_err());
    }

    #[test]
    fn rejects_duplicate_ids_and_unknown_constraint_refs() {
        let bin = Bin::new(int(2), int(4)).unwrap();
        let dup = Instance::new(
            bin.clone(),
            1,
            vec![circle("a", int(1)), circle("a", int(1))],
            vec![],
        );
        assert!(dup.is_err());
        let bad = Instance::new(
            bin,
            1,
            vec![circle("a", int(1))],
            vec![SideConstraint { coeffs: vec![("ghost".into(), int(1))], rhs: int(1) }],
        );
        assert!(bad.is_err());
    }

    #[test]
    fn area_uses_upper_pi_bound() {
        let bin = Bin::new(int(2), int(2)).unwrap();
        let inst =
            Instance::new(bin, 1, vec![circle("a", int(2))], vec![]).unwrap();
        // radius 1 -> area slightly above pi
        assert!(inst.total_area_hi() > rat(314159, 100000));
        assert!(inst.total_area_hi() < rat(314160, 100000));
    }
}
