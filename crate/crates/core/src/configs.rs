//! Radius rounding, configuration enumeration per level, constructive
//! feasibility checking with height-augmented bins, and free-cell
//! estimates.

use crate::geometry::{circle_table, verify_packing, Bin, Circle, Placement};
use crate::instance::Instance;
use crate::partition::{max_circles_per_bin, GapPartition, Mode, SchemeParams};
use crate::rat::{self, Rat};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// One rounded-radius class of a level.
#[derive(Debug, Clone)]
pub struct RadiusClass {
    /// The rounded (never smaller than original) radius.
    pub radius: Rat,
    /// Total copies demanded across members.
    pub demand: BigInt,
    /// Indices into `instance.circles`, sorted by profit descending
    /// (ties by id) so that prefix selection maximizes profit.
    pub members: Vec<usize>,
}

/// All rounded-radius classes of one level, radii strictly increasing.
#[derive(Debug, Clone)]
pub struct RadiusClasses {
    pub level: usize,
    pub classes: Vec<RadiusClass>,
}

impl RadiusClasses {
    pub fn count(&self) -> usize {
        self.classes.len()
    }
}

/// Rounds the radii of one level's circles upward onto the level grid.
///
/// Levels use the geometric grid `{r_min (1+eps)^k} ∪ {r_max}`; "closest
/// value" is resolved as round-up, which the proofs require (a radius must
/// never shrink). Level 0 is special in two modes: with height-only
/// augmentation it uses a uniform grid of pitch `delta r_min / 2` with
/// `delta = eps^2 / (6 K_0^2)` — the rounding factor stays within
/// `1 + delta` while the arithmetic avoids astronomically long geometric
/// grids — and in profit-loss mode it is not rounded at all.
pub fn round_radii(
    instance: &Instance,
    members: &[usize],
    level: usize,
    part: &GapPartition,
    params: &SchemeParams,
) -> RadiusClasses {
    let mut classes: std::collections::BTreeMap<Rat, (BigInt, Vec<usize>)> = Default::default();
    if members.is_empty() {
        return RadiusClasses { level, classes: vec![] };
    }
    let radii: Vec<Rat> = members.iter().map(|&i| instance.circles[i].radius()).collect();
    let r_min = radii.iter().min().unwrap().clone();
    let r_max = radii.iter().max().unwrap().clone();

    enum Rounding {
        Identity,
        Geometric(Rat),
        Uniform(Rat),
    }
    let rounding = if level == 0 {
        match params.mode {
            Mode::Ptas => Rounding::Identity,
            Mode::RasOneDim => {
                let k0 = max_circles_per_bin(instance, params, part, 0).max(BigInt::one());
                let k0 = Rat::from_integer(k0);
                let delta = rat::sq(&params.eps) / (rat::int(6) * &k0 * &k0);
                Rounding::Uniform(delta * &r_min / rat::int(2))
            }
            Mode::Ras => Rounding::Geometric(rat::int(1) + &params.eps),
        }
    } else {
        Rounding::Geometric(rat::int(1) + &params.eps)
    };

    for (pos, &idx) in members.iter().enumerate() {
        let r = &radii[pos];
        let rounded = match &rounding {
            Rounding::Identity => r.clone(),
            Rounding::Uniform(pitch) => {
                if r == &r_max {
                    r_max.clone()
                } else {
                    let k = (r / pitch).ceil().to_integer();
                    (Rat::from_integer(k) * pitch).min(r_max.clone())
                }
            }
            Rounding::Geometric(factor) => {
                // smallest grid value >= r; r_max caps the grid
                let mut v = r_min.clone();
                while &v < r {
                    v *= factor;
                    if v >= r_max {
                        v = r_max.clone();
                        break;
                    }
                }
                v
            }
        };
        debug_assert!(&rounded >= r);
        let entry = classes.entry(rounded).or_insert_with(|| (BigInt::zero(), vec![]));
        entry.0 += BigInt::from(instance.circles[idx].multiplicity);
        entry.1.push(idx);
    }

    let classes = classes
        .into_iter()
        .map(|(radius, (demand, mut members))| {
            members.sort_by(|&a, &b| {
                let ca = &instance.circles[a];
                let cb = &instance.circles[b];
                cb.profit.cmp(&ca.profit).then_with(|| ca.id.cmp(&cb.id))
            });
            RadiusClass { radius, demand, members }
        })
        .collect();
    RadiusClasses { level, classes }
}

/// Disk-backed realization stores implement this. Keys come from
/// [`cache_key`]; cached realizations are re-verified before use, so a
/// stale or corrupt cache can cost time but never correctness.
pub trait RealizationCache {
    fn get(&self, key: &str) -> Option<Vec<(usize, Rat, Rat)>>;
    fn put(&self, key: &str, value: &[(usize, Rat, Rat)]);
}

/// Canonical cache key of a feasibility query.
pub fn cache_key(counts: &[u64], bin_w: &Rat, bin_h: &Rat, gamma: &Rat, seed: u64) -> String {
    let counts: Vec<String> = counts.iter().map(|c| c.to_string()).collect();
    format!(
        "{}|{}|{}|{}|{}",
        counts.join(","),
        rat::format(bin_w),
        rat::format(bin_h),
        rat::format(gamma),
        seed
    )
}

/// A feasible configuration: a count per radius class together with a
/// concrete packing of the class radii in the level's realization bin.
#[derive(Debug, Clone)]
pub struct Configuration {
    pub level: usize,
    pub counts: Vec<u64>,
    pub size: u64,
    /// Upper bound on the total disk area of the (rounded) circles.
    pub area_hi: Rat,
    /// `(class index, center)` per packed circle.
    pub realization: Vec<(usize, Rat, Rat)>,
    /// Estimated number of next-level cells this configuration leaves free.
    pub free_estimate: Rat,
}

/// The free-cell estimate: `(usable area - (1+16 eps) area(C)) / cell
/// area` with the next level's augmented cell denominators.
pub fn free_estimate(
    area_hi: &Rat,
    part: &GapPartition,
    level: usize,
    params: &SchemeParams,
) -> Rat {
    let g = &part.geometry[level];
    let g1 = &part.geometry[level + 1];
    let allowance = rat::int(1) + rat::int(16) * &params.eps;
    (&g.f_area - allowance * area_hi) / (&g1.w_aug * &g1.h_aug)
}

fn disks_of_counts(counts: &[u64], classes: &RadiusClasses) -> Vec<(usize, Rat)> {
    let mut disks: Vec<(usize, Rat)> = Vec::new();
    for (k, &c) in counts.iter().enumerate() {
        for _ in 0..c {
            disks.push((k, classes.classes[k].radius.clone()));
        }
    }
    disks.sort_by(|(ka, ra), (kb, rb)| rb.cmp(ra).then(ka.cmp(kb)));
    disks
}

struct PlacedDisk {
    class: usize,
    x: Rat,
    y: Rat,
    r: Rat,
}

/// Lowest valid center height at abscissa `x` for a disk of radius `r`,
/// or `None` if it cannot sit at this `x` inside the bin.
fn drop_height(
    placed: &[PlacedDisk],
    x: &Rat,
    r: &Rat,
    bin_w: &Rat,
    bin_h: &Rat,
    bits: u32,
) -> Option<Rat> {
    if x < r || x > &(bin_w - r) {
        return None;
    }
    let mut y = r.clone();
    for p in placed {
        let dx = x - &p.x;
        let need = r + &p.r;
        let need2 = &need * &need;
        let dx2 = &dx * &dx;
        if dx2 < need2 {
            // must clear this disk from above; the rounded-up root keeps
            // the separation valid
            let dy = rat::sqrt_ceil(&(need2 - dx2), bits);
            let min_y = &p.y + dy;
            if min_y > y {
                y = min_y;
            }
        }
    }
    if &y + r <= *bin_h {
        Some(y)
    } else {
        None
    }
}

/// Candidate abscissas for the next disk: the walls and single-disk
/// tangencies, clamped into the feasible band.
fn candidate_xs(placed: &[PlacedDisk], r: &Rat, bin_w: &Rat) -> Vec<Rat> {
    let hi = bin_w - r;
    let mut xs = vec![r.clone(), hi.clone()];
    for p in placed {
        xs.push(&p.x + (&p.r + r));
        xs.push(&p.x - (&p.r + r));
        xs.push(p.x.clone());
    }
    for x in xs.iter_mut() {
        if &*x < r {
            *x = r.clone();
        } else if *x > hi {
            *x = hi.clone();
        }
    }
    xs.sort();
    xs.dedup();
    xs
}

fn greedy_pack(
    disks: &[(usize, Rat)],
    bin_w: &Rat,
    bin_h: &Rat,
    bits: u32,
) -> Option<Vec<PlacedDisk>> {
    let mut placed: Vec<PlacedDisk> = Vec::new();
    for (class, r) in disks {
        let mut best: Option<(Rat, Rat)> = None;
        for x in candidate_xs(&placed, r, bin_w) {
            if let Some(y) = drop_height(&placed, &x, r, bin_w, bin_h, bits) {
                let better = match &best {
                    None => true,
                    Some((by, bx)) => (&y, &x) < (by, bx),
                };
                if better {
                    best = Some((y, x));
                }
            }
        }
        let (y, x) = best?;
        placed.push(PlacedDisk { class: *class, x, y, r: r.clone() });
    }
    Some(placed)
}

fn nfdh_fallback(disks: &[(usize, Rat)], bin_w: &Rat, bin_h: &Rat) -> Option<Vec<PlacedDisk>> {
    let hulls: Vec<crate::nfdh::SquareHull> = disks
        .iter()
        .enumerate()
        .map(|(i, (_, r))| crate::nfdh::SquareHull { item: i.to_string(), side: rat::int(2) * r })
        .collect();
    let (shelves, packed) = crate::nfdh::nfdh_pack_capped(&hulls, bin_w, bin_h).ok()?;
    if packed != disks.len() {
        return None;
    }
    let mut out = Vec::new();
    for s in &shelves {
        for (id, x_off) in &s.items {
            let i: usize = id.parse().ok()?;
            let (class, r) = &disks[i];
            out.push(PlacedDisk { class: *class, x: x_off + r, y: &s.base_y + r, r: r.clone() });
        }
    }
    Some(out)
}

/// Exhaustive dyadic-grid search for up to three disks with iterative
/// deepening; complete only relative to the final grid resolution.
fn exact_small_pack(
    disks: &[(usize, Rat)],
    bin_w: &Rat,
    bin_h: &Rat,
    max_bits: u32,
) -> Option<Vec<PlacedDisk>> {
    debug_assert!(disks.len() <= 3);
    let mut node_budget = 2_000_000u64;
    for bits in 2..=max_bits {
        let mut placed: Vec<PlacedDisk> = Vec::new();
        if search_grid(disks, 0, bin_w, bin_h, bits, &mut placed, &mut node_budget) {
            return Some(placed);
        }
        if node_budget == 0 {
            return None;
        }
    }
    None
}

fn search_grid(
    disks: &[(usize, Rat)],
    i: usize,
    bin_w: &Rat,
    bin_h: &Rat,
    bits: u32,
    placed: &mut Vec<PlacedDisk>,
    budget: &mut u64,
) -> bool {
    if i == disks.len() {
        return true;
    }
    let (class, r) = &disks[i];
    let free_w = bin_w - rat::int(2) * r;
    let free_h = bin_h - rat::int(2) * r;
    if free_w.is_negative() || free_h.is_negative() {
        return false;
    }
    let steps = 1u64 << bits;
    let sx = &free_w / rat::int(steps as i64);
    let sy = &free_h / rat::int(steps as i64);
    for iy in 0..=steps {
        let y = r + rat::int(iy as i64) * &sy;
        for ix in 0..=steps {
            if *budget == 0 {
                return false;
            }
            *budget -= 1;
            let x = r + rat::int(ix as i64) * &sx;
            let ok = placed.iter().all(|p| {
                let dx = &x - &p.x;
                let dy = &y - &p.y;
                let need = r + &p.r;
                &dx * &dx + &dy * &dy >= &need * &need
            });
            if ok {
                placed.push(PlacedDisk { class: *class, x: x.clone(), y: y.clone(), r: r.clone() });
                if search_grid(disks, i + 1, bin_w, bin_h, bits, placed, budget) {
                    return true;
                }
                placed.pop();
            }
            if sx.is_zero() {
                break;
            }
        }
        if sy.is_zero() {
            break;
        }
    }
    false
}

fn verify_disks(placed: &[PlacedDisk], bin_w: &Rat, bin_h: &Rat) -> bool {
    let circles: Vec<Circle> = placed
        .iter()
        .enumerate()
        .map(|(i, p)| Circle {
            id: i.to_string(),
            diameter: rat::int(2) * &p.r,
            profit: Rat::zero(),
            multiplicity: 1,
        })
        .collect();
    let table = circle_table(&circles);
    let placements: Vec<Placement> = placed
        .iter()
        .enumerate()
        .map(|(i, p)| Placement { circle: i.to_string(), x: p.x.clone(), y: p.y.clone() })
        .collect();
    let bin = Bin { width: bin_w.clone(), height: bin_h.clone() };
    matches!(verify_packing(&bin, &placements, &table), Ok(v) if v.is_valid())
}

/// Constructive feasibility check: packs the counted class radii into a
/// bin of size `bin_w x (1+gamma) bin_h`, returning the verified
/// realization or `None` when the packer fails. `None` is *not* a proof
/// of infeasibility (except when the exact area certificate fired); a
/// missed configuration only lowers achieved profit, never validity.
pub fn check_feasibility(
    counts: &[u64],
    classes: &RadiusClasses,
    bin_w: &Rat,
    bin_h: &Rat,
    gamma: &Rat,
    seed: u64,
    restarts: u32,
    bits: u32,
) -> Option<Vec<(usize, Rat, Rat)>> {
    let h = (rat::int(1) + gamma) * bin_h;
    let disks = disks_of_counts(counts, classes);
    if disks.is_empty() {
        return Some(vec![]);
    }
    // certain rejections: an oversized disk or total area above the bin
    for (_, r) in &disks {
        let d = rat::int(2) * r;
        if &d > bin_w || d > h {
            return None;
        }
    }
    let area_lo: Rat = disks.iter().map(|(_, r)| rat::pi_lo() * r * r).sum();
    if area_lo > bin_w * &h {
        return None;
    }

    let accept = |p: Vec<PlacedDisk>| -> Option<Vec<(usize, Rat, Rat)>> {
        if verify_disks(&p, bin_w, &h) {
            Some(p.into_iter().map(|d| (d.class, d.x, d.y)).collect())
        } else {
            None
        }
    };

    if let Some(p) = greedy_pack(&disks, bin_w, &h, bits) {
        if let Some(ok) = accept(p) {
            return Some(ok);
        }
    }
    if let Some(p) = nfdh_fallback(&disks, bin_w, &h) {
        if let Some(ok) = accept(p) {
            return Some(ok);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..restarts {
        let mut shuffled = disks.clone();
        shuffled.shuffle(&mut rng);
        if let Some(p) = greedy_pack(&shuffled, bin_w, &h, bits) {
            if let Some(ok) = accept(p) {
                return Some(ok);
            }
        }
    }
    if disks.len() <= 3 {
        if let Some(p) = exact_small_pack(&disks, bin_w, &h, 6) {
            if let Some(ok) = accept(p) {
                return Some(ok);
            }
        }
    }
    None
}

struct EnumCtx<'a> {
    classes: &'a RadiusClasses,
    class_area: &'a [Rat],
    demands: &'a [u64],
    bin_area: &'a Rat,
    kj: u64,
    budget: u64,
    visited: u64,
    out: Vec<Configuration>,
    pack_w: &'a Rat,
    pack_h: &'a Rat,
    gamma: &'a Rat,
    seed: u64,
    restarts: u32,
    bits: u32,
    part: &'a GapPartition,
    level: usize,
    params: &'a SchemeParams,
}

fn enumerate_rec(
    k: usize,
    counts: &mut Vec<u64>,
    size: u64,
    area_lo: Rat,
    ctx: &mut EnumCtx<'_>,
) -> Result<()> {
    if k == counts.len() {
        ctx.visited += 1;
        if ctx.visited > ctx.budget {
            return Err(Error::Budget(format!(
                "configuration enumeration exceeded {} count vectors",
                ctx.budget
            )));
        }
        let mut realization = None;
        if let Some(cache) = &ctx.params.cache {
            let key = cache_key(counts, ctx.pack_w, ctx.pack_h, ctx.gamma, ctx.seed);
            if let Some(cached) = cache.get(&key) {
                // trust nothing from disk: re-verify exactly
                let ok = {
                    let disks: Vec<PlacedDisk> = cached
                        .iter()
                        .map(|(k, x, y)| PlacedDisk {
                            class: *k,
                            x: x.clone(),
                            y: y.clone(),
                            r: ctx.classes.classes[*k].radius.clone(),
                        })
                        .collect();
                    let h = (rat::int(1) + ctx.gamma) * ctx.pack_h;
                    verify_disks(&disks, ctx.pack_w, &h)
                };
                if ok {
                    realization = Some(cached);
                }
            }
        }
        if realization.is_none() {
            realization = check_feasibility(
                counts,
                ctx.classes,
                ctx.pack_w,
                ctx.pack_h,
                ctx.gamma,
                ctx.seed,
                ctx.restarts,
                ctx.bits,
            );
            if let (Some(r), Some(cache)) = (&realization, &ctx.params.cache) {
                let key = cache_key(counts, ctx.pack_w, ctx.pack_h, ctx.gamma, ctx.seed);
                cache.put(&key, r);
            }
        }
        if let Some(realization) = realization {
            let area_hi: Rat = counts
                .iter()
                .zip(ctx.classes.classes.iter())
                .map(|(&c, cl)| rat::pi_hi() * &cl.radius * &cl.radius * rat::int(c as i64))
                .sum();
            let f = free_estimate(&area_hi, ctx.part, ctx.level, ctx.params);
            ctx.out.push(Configuration {
                level: ctx.level,
                counts: counts.clone(),
                size,
                area_hi,
                realization,
                free_estimate: f,
            });
        }
        return Ok(());
    }
    let mut c = 0u64;
    loop {
        counts[k] = c;
        let new_size = size + c;
        let new_area = &area_lo + rat::int(c as i64) * &ctx.class_area[k];
        if new_size > ctx.kj || new_area > *ctx.bin_area {
            break;
        }
        enumerate_rec(k + 1, counts, new_size, new_area, ctx)?;
        if c >= ctx.demands[k] {
            break;
        }
        c += 1;
    }
    counts[k] = 0;
    Ok(())
}

/// Enumerates every feasible configuration of a level in deterministic
/// lexicographic order: all count vectors within the demands, the per-bin
/// circle cap and the area filter, each then checked by the constructive
/// packer. The empty configuration is always present.
pub fn enumerate_configurations(
    instance: &Instance,
    classes: &RadiusClasses,
    part: &GapPartition,
    level: usize,
    params: &SchemeParams,
) -> Result<Vec<Configuration>> {
    let (bin_w, bin_h_realized) = part.realization_bin(level, params);
    // check_feasibility re-applies gamma itself, so hand it the
    // gamma-free height
    let one_gamma = rat::int(1) + &params.gamma;
    let (pack_h, gamma) = match (level, params.mode) {
        (0, Mode::Ptas) => (bin_h_realized.clone(), Rat::zero()),
        _ => (&bin_h_realized / &one_gamma, params.gamma.clone()),
    };
    let bin_area = &bin_w * &bin_h_realized;
    let kj = max_circles_per_bin(instance, params, part, level);
    let kj_u64 = kj.to_u64().unwrap_or(u64::MAX);

    let pi = rat::pi_lo();
    let class_area: Vec<Rat> =
        classes.classes.iter().map(|c| &pi * &c.radius * &c.radius).collect();
    let demands: Vec<u64> =
        classes.classes.iter().map(|c| c.demand.to_u64().unwrap_or(u64::MAX)).collect();

    let mut counts = vec![0u64; classes.count()];
    let mut ctx = EnumCtx {
        classes,
        class_area: &class_area,
        demands: &demands,
        bin_area: &bin_area,
        kj: kj_u64,
        budget: params.config_budget,
        visited: 0,
        out: Vec::new(),
        pack_w: &bin_w,
        pack_h: &pack_h,
        gamma: &gamma,
        seed: params.seed,
        restarts: params.packer_restarts,
        bits: params.precision_bits,
        part,
        level,
        params,
    };
    enumerate_rec(0, &mut counts, 0, Rat::zero(), &mut ctx)?;
    Ok(ctx.out)
}

/// Walks a class's member circles in profit order, yielding each circle
/// index as many times as its multiplicity, without materializing copies.
pub struct ProfitCursor<'a> {
    instance: &'a Instance,
    members: &'a [usize],
    pos: usize,
    used_of_current: u64,
}

impl<'a> ProfitCursor<'a> {
    pub fn new(instance: &'a Instance, class: &'a RadiusClass) -> Self {
        Self { instance, members: &class.members, pos: 0, used_of_current: 0 }
    }

    /// Takes up to `want` copies, returning `(circle index, copies)` runs.
    pub fn take_copies(&mut self, want: &BigInt) -> Vec<(usize, u64)> {
        let mut left = want.clone();
        let mut out = Vec::new();
        while left.is_positive() && self.pos < self.members.len() {
            let idx = self.members[self.pos];
            let mult = self.instance.circles[idx].multiplicity;
            let avail = mult - self.used_of_current;
            if avail == 0 {
                self.pos += 1;
                self.used_of_current = 0;
                continue;
            }
            let grab = if BigInt::from(avail) <= left {
                avail
            } else {
                left.to_u64().expect("fits because left < avail <= u64::MAX")
            };
            out.push((idx, grab));
            self.used_of_current += grab;
            left -= BigInt::from(grab);
        }
        out
    }
}

impl Iterator for ProfitCursor<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        self.take_copies(&BigInt::one()).first().map(|&(idx, _)| idx)
    }
}

/// Substitutes the highest-profit original circles for the scaled radii of
/// one realized configuration. Returns placements referencing original
/// item ids; when a class is asked for more copies than its demand, the
/// surplus realization slots stay empty.
pub fn realize_with_originals(
    config: &Configuration,
    classes: &RadiusClasses,
    instance: &Instance,
) -> (Vec<Placement>, Rat) {
    let mut cursors: Vec<ProfitCursor<'_>> =
        classes.classes.iter().map(|cl| ProfitCursor::new(instance, cl)).collect();
    let mut placements = Vec::new();
    let mut profit = Rat::zero();
    for (class, x, y) in &config.realization {
        if let Some(idx) = cursors[*class].next() {
            let c = &instance.circles[idx];
            placements.push(Placement { circle: c.id.clone(), x: x.clone(), y: y.clone() });
            profit += &c.profit;
        }
    }
    (placements, profit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Bin;
    use crate::partition::{build_groups, build_levels, ScaleProfile};
    use crate::rat::{int, rat};

    fn instance_with(sizes: &[(Rat, i64)], w: Rat, h: Rat) -> Instance {
        let circles = sizes
            .iter()
            .enumerate()
            .map(|(i, (d, p))| Circle {
                id: format!("c{i}"),
                diameter: d.clone(),
                profit: int(*p),
                multiplicity: 1,
            })
            .collect();
        Instance::new(Bin::new(w, h).unwrap(), 1, circles, vec![]).unwrap()
    }

    fn setup(sizes: &[(Rat, i64)]) -> (Instance, GapPartition, SchemeParams) {
        let instance = instance_with(sizes, int(1), int(1));
        let params = SchemeParams::new(rat(1, 4), Mode::Ras).unwrap();
        let groups = build_groups(&instance, &params).unwrap();
        let part = build_levels(&instance, &groups, 1, &params).unwrap();
        (instance, part, params)
    }

    #[test]
    fn equal_radii_collapse_to_one_class() {
        let (instance, part, params) =
            setup(&[(rat(1, 2), 1), (rat(1, 2), 2), (rat(1, 2), 3)]);
        let classes = round_radii(&instance, &part.levels[0], 0, &part, &params);
        assert_eq!(classes.count(), 1);
        assert_eq!(classes.classes[0].demand, BigInt::from(3));
        assert_eq!(classes.classes[0].members, vec![2, 1, 0]);
    }

    #[test]
    fn grid_keeps_rmax_and_rounds_up() {
        // radii 1/4 and 3/10 with eps = 1/4: 1/4 * 5/4 = 5/16 >= 3/10, so
        // the grid is {1/4, 3/10} and both radii keep their own class
        let (instance, part, params) = setup(&[(rat(1, 2), 1), (rat(3, 5), 0)]);
        let classes = round_radii(&instance, &part.levels[0], 0, &part, &params);
        let radii: Vec<Rat> = classes.classes.iter().map(|c| c.radius.clone()).collect();
        assert_eq!(radii, vec![rat(1, 4), rat(3, 10)]);
    }

    #[test]
    fn rounding_never_shrinks_and_stays_within_factor() {
        let sizes: Vec<(Rat, i64)> = [(7, 16), (9, 16), (11, 16), (13, 16), (15, 16)]
            .iter()
            .map(|&(p, q)| (rat(p, q), 1))
            .collect();
        let (instance, part, params) = setup(&sizes);
        let classes = round_radii(&instance, &part.levels[0], 0, &part, &params);
        let bound = rat::int(1) + &params.eps;
        for cl in &classes.classes {
            for &m in &cl.members {
                let orig = instance.circles[m].radius();
                assert!(cl.radius >= orig);
                assert!(&cl.radius / &orig <= bound);
            }
        }
    }

    #[test]
    fn ptas_mode_keeps_original_radii() {
        let sizes = [(rat(1, 2), 1), (rat(3, 5), 1), (rat(9, 16), 1)];
        let instance = instance_with(&sizes, int(1), int(1));
        let params = SchemeParams::new(rat(1, 4), Mode::Ptas).unwrap();
        let groups = build_groups(&instance, &params).unwrap();
        let part = build_levels(&instance, &groups, 1, &params).unwrap();
        let classes = round_radii(&instance, &part.levels[0], 0, &part, &params);
        assert_eq!(classes.count(), 3);
        for cl in &classes.classes {
            let orig = instance.circles[cl.members[0]].radius();
            assert_eq!(cl.radius, orig);
        }
    }

    #[test]
    fn one_dim_mode_rounds_within_delta() {
        let sizes = [(rat(1, 2), 1), (rat(33, 64), 1)];
        let instance = instance_with(&sizes, int(1), int(1));
        let params = SchemeParams::new(rat(1, 4), Mode::RasOneDim).unwrap();
        let groups = build_groups(&instance, &params).unwrap();
        let part = build_levels(&instance, &groups, 1, &params).unwrap();
        let classes = round_radii(&instance, &part.levels[0], 0, &part, &params);
        let k0 = Rat::from_integer(max_circles_per_bin(&instance, &params, &part, 0));
        let delta = rat::sq(&params.eps) / (int(6) * &k0 * &k0);
        let bound = rat::int(1) + delta;
        for cl in &classes.classes {
            for &m in &cl.members {
                let orig = instance.circles[m].radius();
                assert!(cl.radius >= orig);
                assert!(&cl.radius / &orig <= bound, "rounded too far");
            }
        }
    }

    #[test]
    fn feasibility_single_and_grid() {
        let (instance, part, params) = setup(&[(rat(1, 2), 1)]);
        let classes = round_radii(&instance, &part.levels[0], 0, &part, &params);
        let got = check_feasibility(&[1], &classes, &int(1), &int(1), &params.gamma, 0, 4, 32);
        assert!(got.is_some());
        // k^2 equal circles of diameter 1/k in a unit bin (k = 3)
        let nine = instance_with(&[(rat(1, 3), 1)], int(1), int(1));
        let groups = build_groups(&nine, &params).unwrap();
        let part9 = build_levels(&nine, &groups, 1, &params).unwrap();
        let mut cl9 = round_radii(&nine, &part9.levels[0], 0, &part9, &params);
        cl9.classes[0].demand = BigInt::from(9);
        let got9 = check_feasibility(&[9], &cl9, &int(1), &int(1), &Rat::zero(), 0, 4, 32);
        assert!(got9.is_some(), "3x3 lattice should pack");
    }

    #[test]
    fn feasibility_rejects_three_unit_circles_in_two_by_two() {
        // with gamma = 1/8 the bin is 2 x 2.25; unit-radius centers are
        // confined to the segment {1} x [1, 1.25], which cannot hold even
        // two centers at distance 2
        let circles =
            vec![Circle { id: "u".into(), diameter: int(2), profit: int(0), multiplicity: 3 }];
        let instance =
            Instance::new(Bin::new(int(2), int(2)).unwrap(), 1, circles, vec![]).unwrap();
        let params = SchemeParams::new(rat(1, 4), Mode::Ras).unwrap();
        let groups = build_groups(&instance, &params).unwrap();
        let part = build_levels(&instance, &groups, 1, &params).unwrap();
        let classes = round_radii(&instance, &part.levels[0], 0, &part, &params);
        assert!(check_feasibility(&[3], &classes, &int(2), &int(2), &rat(1, 8), 0, 4, 32)
            .is_none());
        assert!(check_feasibility(&[2], &classes, &int(2), &int(2), &rat(1, 8), 0, 4, 32)
            .is_none());
        assert!(check_feasibility(&[1], &classes, &int(2), &int(2), &rat(1, 8), 0, 4, 32)
            .is_some());
    }

    #[test]
    fn enumeration_includes_empty_and_respects_demand() {
        let (instance, part, params) = setup(&[(rat(1, 2), 1)]);
        let mut classes = round_radii(&instance, &part.levels[0], 0, &part, &params);
        classes.classes[0].demand = BigInt::from(3);
        let configs = enumerate_configurations(&instance, &classes, &part, 0, &params).unwrap();
        let count_vecs: Vec<Vec<u64>> = configs.iter().map(|c| c.counts.clone()).collect();
        assert!(count_vecs.contains(&vec![0]));
        assert!(count_vecs.contains(&vec![1]));
        assert!(count_vecs.contains(&vec![2]));
        // demand caps the enumeration even though the augmented bin is huge
        assert!(count_vecs.iter().all(|v| v[0] <= 3));
    }

    #[test]
    fn enumeration_budget_errors_out() {
        let (instance, part, mut params) =
            setup(&[(rat(1, 32), 1), (rat(3, 64), 1), (rat(5, 128), 1)]);
        params.config_budget = 2;
        let classes = round_radii(&instance, &part.levels[0], 0, &part, &params);
        let got = enumerate_configurations(&instance, &classes, &part, 0, &params);
        assert!(matches!(got, Err(Error::Budget(_))));
    }

    #[test]
    fn free_estimate_of_empty_config() {
        let (_, part, params) = setup(&[(rat(1, 2), 1)]);
        let f = free_estimate(&Rat::zero(), &part, 0, &params);
        let g = &part.geometry[0];
        let g1 = &part.geometry[1];
        assert_eq!(f, &g.f_area / (&g1.w_aug * &g1.h_aug));
    }

    #[test]
    fn realize_with_originals_picks_top_profit() {
        let (instance, part, params) =
            setup(&[(rat(1, 2), 5), (rat(1, 2), 3), (rat(1, 2), 1)]);
        let classes = round_radii(&instance, &part.levels[0], 0, &part, &params);
        let realization =
            check_feasibility(&[2], &classes, &int(1), &int(2), &params.gamma, 0, 4, 32)
                .expect("two half-unit disks fit");
        let config = Configuration {
            level: 0,
            counts: vec![2],
            size: 2,
            area_hi: Rat::zero(),
            realization,
            free_estimate: Rat::zero(),
        };
        let (placements, profit) = realize_with_originals(&config, &classes, &instance);
        assert_eq!(placements.len(), 2);
        assert_eq!(profit, int(8)); // profits 5 and 3
        let ids: Vec<&str> = placements.iter().map(|p| p.circle.as_str()).collect();
        assert!(ids.contains(&"c0") && ids.contains(&"c1"));
    }

    #[test]
    fn overdemand_packs_only_available_originals() {
        let (instance, part, params) = setup(&[(rat(1, 2), 5)]);
        let classes = round_radii(&instance, &part.levels[0], 0, &part, &params);
        let realization =
            check_feasibility(&[2], &classes, &int(1), &int(2), &params.gamma, 0, 4, 32)
                .expect("fits");
        let config = Configuration {
            level: 0,
            counts: vec![2],
            size: 2,
            area_hi: Rat::zero(),
            realization,
            free_estimate: Rat::zero(),
        };
        let (placements, profit) = realize_with_originals(&config, &classes, &instance);
        assert_eq!(placements.len(), 1);
        assert_eq!(profit, int(5));
    }

    #[test]
    fn profit_cursor_handles_big_multiplicities() {
        let circles = vec![
            Circle { id: "a".into(), diameter: int(1), profit: int(9), multiplicity: 1_000_000_000 },
            Circle { id: "b".into(), diameter: int(1), profit: int(1), multiplicity: 2 },
        ];
        let instance =
            Instance::new(Bin::new(int(1), int(1)).unwrap(), 1, circles, vec![]).unwrap();
        let class = RadiusClass {
            radius: rat(1, 2),
            demand: BigInt::from(1_000_000_002u64),
            members: vec![0, 1],
        };
        let mut cur = ProfitCursor::new(&instance, &class);
        let runs = cur.take_copies(&BigInt::from(1_000_000_001u64));
        assert_eq!(runs, vec![(0, 1_000_000_000), (1, 1)]);
        let rest = cur.take_copies(&BigInt::from(5));
        assert_eq!(rest, vec![(1, 1)]);
    }

    #[test]
    fn t_bound_matches_paper_constant() {
        // eps = 1/4 paper profile: grid length over ratio r^(r(r-1)) plus 2
        // stays below r^3 ln r
        let r = 4f64;
        let ratio = r.powf(r * (r - 1.0));
        let grid_len = ratio.ln() / (1.25f64).ln() + 2.0;
        assert!(grid_len <= r.powi(3) * r.ln());
    }

    #[test]
    fn custom_profile_level_one_enumeration() {
        let mut params = SchemeParams::new(rat(1, 4), Mode::Ras).unwrap();
        params.scale_profile = ScaleProfile::Custom {
            group_scale: params.r,
            bin_offset: params.r,
            bin_stride: params.r * params.r,
        };
        let tiny = rat::pow_rat(&rat(1, 4), 8) / int(2);
        let sizes = [(int(1), 1i64), (tiny, 1)];
        let instance = instance_with(&sizes, int(1), int(1));
        let groups = build_groups(&instance, &params).unwrap();
        let part = build_levels(&instance, &groups, 1, &params).unwrap();
        assert_eq!(part.levels.len(), 2);
        assert_eq!(part.levels[1].len(), 1);
        let classes = round_radii(&instance, &part.levels[1], 1, &part, &params);
        let configs = enumerate_configurations(&instance, &classes, &part, 1, &params).unwrap();
        assert!(configs.iter().any(|c| c.size == 1), "tiny circle fits its level bin");
    }
}
