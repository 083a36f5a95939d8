//! Seeded random generation of instances and valid packings.
//!
//! Everything here is deterministic in the seed and emits dyadic
//! rationals, keeping downstream exact arithmetic fast.

use crate::geometry::{Bin, Circle, Placement};
use crate::instance::{Instance, SideConstraint};
use crate::rat::{self, Rat};
use crate::Result;
use num_traits::{Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Which diameter ranges the generator draws from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SizeMix {
    /// Diameters in `[w/4, w]` — everything lands in the first group.
    Large,
    /// Diameters in `[w/64, w]`.
    Mixed,
    /// Mostly large plus a few tiny circles around `w * eps^k` for the
    /// given exponent, reaching deeper levels under custom profiles.
    WithTiny { exponent: u32 },
}

/// Generator knobs.
#[derive(Debug, Clone)]
pub struct GenConfig {
    pub seed: u64,
    pub n: usize,
    pub bin_w: Rat,
    pub bin_h: Rat,
    pub mix: SizeMix,
    pub max_multiplicity: u64,
    pub max_profit: u64,
    /// Number of random capacity side constraints.
    pub constraints: usize,
    pub m: u64,
}

impl GenConfig {
    pub fn new(seed: u64, n: usize) -> Self {
        Self {
            seed,
            n,
            bin_w: rat::int(1),
            bin_h: rat::int(1),
            mix: SizeMix::Large,
            max_multiplicity: 1,
            max_profit: 100,
            constraints: 0,
            m: 1,
        }
    }
}

fn dyadic_in(rng: &mut ChaCha8Rng, lo: &Rat, hi: &Rat, bits: u32) -> Rat {
    // lo + k (hi - lo) / 2^bits for random k
    let steps = 1u64 << bits;
    let k = rng.gen_range(0..=steps);
    lo + rat::rat(k as i64, steps as i64) * (hi - lo)
}

/// Deterministic random instance.
pub fn generate(cfg: &GenConfig) -> Result<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let w = &cfg.bin_w;
    let mut circles = Vec::with_capacity(cfg.n);
    for i in 0..cfg.n {
        let d = match cfg.mix {
            SizeMix::Large => dyadic_in(&mut rng, &(w / rat::int(4)), w, 8),
            SizeMix::Mixed => dyadic_in(&mut rng, &(w / rat::int(64)), w, 10),
            SizeMix::WithTiny { exponent } => {
                if i % 3 == 2 {
                    let base = w * rat::pow_rat(&rat::rat(1, 2), exponent);
                    dyadic_in(&mut rng, &(&base / rat::int(2)), &base, 6)
                } else {
                    dyadic_in(&mut rng, &(w / rat::int(4)), w, 8)
                }
            }
        };
        let profit = rat::int(rng.gen_range(1..=cfg.max_profit) as i64);
        let multiplicity = rng.gen_range(1..=cfg.max_multiplicity);
        circles.push(Circle { id: format!("c{i}"), diameter: d, profit, multiplicity });
    }
    let mut constraints = Vec::new();
    for _ in 0..cfg.constraints {
        // small random capacity constraint over two or three items
        let k = rng.gen_range(2..=3usize.min(cfg.n.max(2)));
        let mut coeffs = Vec::new();
        for _ in 0..k {
            let idx = rng.gen_range(0..cfg.n);
            coeffs.push((format!("c{idx}"), rat::int(rng.gen_range(1..=3) as i64)));
        }
        coeffs.sort_by(|a, b| a.0.cmp(&b.0));
        coeffs.dedup_by(|a, b| a.0 == b.0);
        let rhs = rat::int(rng.gen_range(1..=4) as i64);
        constraints.push(SideConstraint { coeffs, rhs });
    }
    Instance::new(
        Bin::new(cfg.bin_w.clone(), cfg.bin_h.clone())?,
        cfg.m,
        circles,
        constraints,
    )
}

/// A valid-by-construction random packing: random centers are accepted
/// with the largest dyadic radius that keeps the arrangement a packing
/// (capped by `max_d`), until `n` circles are placed or attempts run out.
pub fn random_packing(
    seed: u64,
    bin: &Bin,
    n: usize,
    max_d: &Rat,
) -> (Vec<Circle>, Vec<Placement>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut circles = Vec::new();
    let mut placements: Vec<(Rat, Rat, Rat)> = Vec::new();
    let mut attempts = 0;
    while circles.len() < n && attempts < 40 * n {
        attempts += 1;
        let x = dyadic_in(&mut rng, &Rat::zero(), &bin.width, 10);
        let y = dyadic_in(&mut rng, &Rat::zero(), &bin.height, 10);
        // largest radius fitting walls and neighbors, floored dyadically
        let mut limit = (&x).min(&(&bin.width - &x)).clone();
        let wall_y = (&y).min(&(&bin.height - &y)).clone();
        if wall_y < limit {
            limit = wall_y;
        }
        for (px, py, pr) in &placements {
            let dx = &x - px;
            let dy = &y - py;
            let dist = rat::sqrt_floor(&(&dx * &dx + &dy * &dy), 20);
            let room = &dist - pr;
            if room < limit {
                limit = room;
            }
        }
        let cap = max_d / rat::int(2);
        if limit > cap {
            limit = cap;
        }
        if limit <= Rat::zero() {
            continue;
        }
        // floor to a dyadic value to keep numbers small
        let steps = rat::int(1 << 12);
        let r = (&limit * &steps).floor() / &steps;
        if !r.is_positive() {
            continue;
        }
        let id = format!("g{}", circles.len());
        circles.push(Circle {
            id: id.clone(),
            diameter: rat::int(2) * &r,
            profit: rat::int(1),
            multiplicity: 1,
        });
        placements.push((x, y, r));
    }
    let out = circles
        .iter()
        .zip(placements.iter())
        .map(|(c, (x, y, _))| Placement { circle: c.id.clone(), x: x.clone(), y: y.clone() })
        .collect();
    (circles, out)
}

/// Perturbs each center by independent dyadic offsets of magnitude at
/// most `eta` (clamped to keep coordinates meaningful, not validity).
pub fn jitter_packing(
    seed: u64,
    placements: &[Placement],
    eta: &Rat,
) -> Vec<Placement> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    placements
        .iter()
        .map(|p| {
            let dx = dyadic_in(&mut rng, &(-eta.clone()), eta, 8);
            let dy = dyadic_in(&mut rng, &(-eta.clone()), eta, 8);
            Placement { circle: p.circle.clone(), x: &p.x + dx, y: &p.y + dy }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{circle_table, verify_packing};
    use crate::rat::{int, rat};

    #[test]
    fn generation_is_seed_deterministic() {
        let cfg = GenConfig { n: 6, ..GenConfig::new(42, 6) };
        let a = generate(&cfg).unwrap();
        let b = generate(&cfg).unwrap();
        assert_eq!(a.circles.len(), b.circles.len());
        for (x, y) in a.circles.iter().zip(b.circles.iter()) {
            assert_eq!(x.diameter, y.diameter);
            assert_eq!(x.profit, y.profit);
        }
    }

    #[test]
    fn random_packings_verify() {
        let bin = Bin::new(int(4), int(4)).unwrap();
        for seed in 0..20 {
            let (circles, placements) = random_packing(seed, &bin, 8, &int(2));
            let table = circle_table(&circles);
            let v = verify_packing(&bin, &placements, &table).unwrap();
            assert!(v.is_valid(), "seed {seed}");
        }
    }

    #[test]
    fn jitter_moves_centers_within_eta() {
        let bin = Bin::new(int(4), int(4)).unwrap();
        let (_, placements) = random_packing(3, &bin, 6, &int(2));
        let eta = rat(1, 32);
        let moved = jitter_packing(9, &placements, &eta);
        for (a, b) in placements.iter().zip(moved.iter()) {
            assert!((&a.x - &b.x).abs() <= eta);
            assert!((&a.y - &b.y).abs() <= eta);
        }
    }
}
