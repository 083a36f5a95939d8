//! End-to-end drivers: gap partitioning, medium packing, configuration
//! solving, rounding, recursive grid placement and final accounting for
//! the knapsack, multiple knapsack, bin packing, strip packing and
//! minimum container problems.

use crate::configs::{
    enumerate_configurations, round_radii, Configuration, ProfitCursor, RadiusClasses,
};
use crate::geometry::{
    cell_intersects_disk, free_cells_limited, verify_packing, Bin, CellRect,
    Placement, Verdict,
};
use crate::instance::Instance;
use crate::lp::{balanced_solve, build_frounded, round_up, LpRow, RowTag, Sense, Variant};
use crate::nfdh::{nfdh_pack, pack_medium, MediumPacking, SquareHull};
use crate::partition::{
    build_groups, build_levels, circles_of, profit_of, select_medium_order, GapPartition, Mode,
    SchemeParams,
};
use crate::rat::{self, Rat};
use crate::{Error, Result};
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::HashMap;

/// One placed bin (or subbin): its realized dimensions, the circles
/// placed directly in it, and child cells hosting deeper levels.
/// `count` > 1 states that this exact bin repeats (identical content).
#[derive(Debug, Clone)]
pub struct PackedBin {
    pub bin: Bin,
    pub level: usize,
    pub placements: Vec<Placement>,
    pub cells: Vec<PackedCell>,
    pub count: BigUint,
}

/// A child bin occupying a grid cell of its parent; `rect` is in the
/// parent's coordinates, the child's content in its own.
#[derive(Debug, Clone)]
pub struct PackedCell {
    pub rect: CellRect,
    pub child: PackedBin,
}

/// A complete solution.
#[derive(Debug, Clone)]
pub struct Packing {
    pub mode: Mode,
    pub bins: Vec<PackedBin>,
    pub total_profit: Rat,
    /// Achieved width/height augmentation factors over the nominal bin.
    pub aug_width: Rat,
    pub aug_height: Rat,
    /// `(aug_height - 1) / eps`, the emitted height constant.
    pub height_constant: Rat,
    /// For profit-loss mode: certified upper bound on the optimum and the
    /// emitted constant `c` with `profit >= (1 - c eps) upper_bound`.
    pub profit_upper_bound: Option<Rat>,
    pub profit_constant: Option<Rat>,
}

impl PackedBin {
    fn empty(bin: Bin, level: usize) -> Self {
        Self { bin, level, placements: vec![], cells: vec![], count: BigUint::one() }
    }
}

/// Flattens a bin tree into absolute placements.
pub fn flatten_bin(bin: &PackedBin) -> Vec<Placement> {
    let mut out = Vec::new();
    fn rec(node: &PackedBin, ox: &Rat, oy: &Rat, out: &mut Vec<Placement>) {
        for p in &node.placements {
            out.push(Placement { circle: p.circle.clone(), x: ox + &p.x, y: oy + &p.y });
        }
        for cell in &node.cells {
            let cx = ox + &cell.rect.x0;
            let cy = oy + &cell.rect.y0;
            rec(&cell.child, &cx, &cy, out);
        }
    }
    rec(bin, &Rat::zero(), &Rat::zero(), &mut out);
    out
}

/// Exact re-verification of a whole packing: every bin verifies as a
/// 0-packing after flattening, children stay inside their cells, and no
/// cell intersects a circle placed at any ancestor level (the structured
/// property is re-checked geometrically, not trusted from bookkeeping).
pub fn verify_packing_tree(packing: &Packing, instance: &Instance) -> Result<()> {
    let table = instance.table();
    let table: crate::geometry::CircleTable<'_> =
        table.iter().map(|(k, v)| (*k, *v)).collect();
    for (b, bin) in packing.bins.iter().enumerate() {
        let flat = flatten_bin(bin);
        match verify_packing(&bin.bin, &flat, &table)? {
            Verdict::Valid => {}
            Verdict::Invalid { xi_star, .. } => {
                return Err(Error::Internal(format!(
                    "bin {b} fails verification with xi* = {}",
                    rat::format(&xi_star)
                )))
            }
        }
        check_structure(bin, &Rat::zero(), &Rat::zero(), &mut Vec::new(), &table, b)?;
    }
    Ok(())
}

fn check_structure(
    node: &PackedBin,
    ox: &Rat,
    oy: &Rat,
    ancestors: &mut Vec<(Rat, Rat, Rat)>,
    table: &crate::geometry::CircleTable<'_>,
    bin_no: usize,
) -> Result<()> {
    let my_disks: Vec<(Rat, Rat, Rat)> = node
        .placements
        .iter()
        .map(|p| {
            let r = table
                .get(p.circle.as_str())
                .map(|c| c.radius())
                .ok_or_else(|| Error::Input(format!("unknown circle {}", p.circle)))?;
            Ok((ox + &p.x, oy + &p.y, r))
        })
        .collect::<Result<_>>()?;
    ancestors.extend(my_disks.iter().cloned());
    for cell in &node.cells {
        let abs = CellRect {
            x0: ox + &cell.rect.x0,
            y0: oy + &cell.rect.y0,
            x1: ox + &cell.rect.x1,
            y1: oy + &cell.rect.y1,
        };
        for (cx, cy, r) in ancestors.iter() {
            if cell_intersects_disk(&abs, cx, cy, r) {
                return Err(Error::Internal(format!(
                    "bin {bin_no}: a level-{} cell intersects an ancestor circle",
                    cell.child.level
                )));
            }
        }
        // child content must stay inside the cell
        if cell.child.bin.width > abs.width() || cell.child.bin.height > abs.height() {
            return Err(Error::Internal(format!(
                "bin {bin_no}: a level-{} child outgrows its cell",
                cell.child.level
            )));
        }
        let cx0 = abs.x0.clone();
        let cy0 = abs.y0.clone();
        check_structure(&cell.child, &cx0, &cy0, ancestors, table, bin_no)?;
    }
    for _ in 0..my_disks.len() {
        ancestors.pop();
    }
    Ok(())
}

/// The compact solution encoding: distinct bin types with multiplicities.
#[derive(Debug, Clone)]
pub struct ShortDescription {
    pub entries: Vec<(String, BigUint)>,
}

impl ShortDescription {
    /// Total number of bins described.
    pub fn total(&self) -> BigUint {
        self.entries.iter().map(|(_, c)| c.clone()).sum()
    }
}

fn bin_type_key(bin: &PackedBin) -> String {
    let mut parts: Vec<String> = bin
        .placements
        .iter()
        .map(|p| format!("{}@{},{}", p.circle, rat::format(&p.x), rat::format(&p.y)))
        .collect();
    parts.sort();
    let mut cells: Vec<String> = bin
        .cells
        .iter()
        .map(|c| {
            format!(
                "[{},{}:{}]",
                rat::format(&c.rect.x0),
                rat::format(&c.rect.y0),
                bin_type_key(&c.child)
            )
        })
        .collect();
    cells.sort();
    format!(
        "{}x{}|{}|{}",
        rat::format(&bin.bin.width),
        rat::format(&bin.bin.height),
        parts.join(";"),
        cells.join(";")
    )
}

/// Groups identical bins of a packing into (type, multiplicity) entries.
pub fn short_description(packing: &Packing) -> ShortDescription {
    let mut census: HashMap<String, BigUint> = HashMap::new();
    for bin in &packing.bins {
        *census.entry(bin_type_key(bin)).or_insert_with(BigUint::zero) += &bin.count;
    }
    let mut entries: Vec<(String, BigUint)> = census.into_iter().collect();
    entries.sort();
    ShortDescription { entries }
}

/// Sequential-fill census arithmetic: child groups (type, count) are
/// poured in order into parent bins of the given types (count, capacity
/// each), opening parent groups in order. Each child group closes with at
/// most two new composite parent types. Pure big-integer arithmetic — no
/// bins are materialized.
pub fn fill_census(
    parents: &[(String, BigUint, u64)],
    children: &[(String, BigUint)],
) -> Vec<(String, BigUint)> {
    let mut out: Vec<(String, BigUint)> = Vec::new();
    let mut pi = 0usize; // parent group index
    let mut used_in_group = BigUint::zero(); // fully filled bins of current group
    let mut partial: Option<(Vec<(String, BigUint)>, BigUint)> = None; // (content, cells used)

    for (ctype, ccount) in children {
        let mut left = ccount.clone();
        while left > BigUint::zero() && pi < parents.len() {
            let (_ptype, pcount, cap) = &parents[pi];
            let cap_big = BigUint::from(*cap);
            if cap_big.is_zero() {
                pi += 1;
                used_in_group = BigUint::zero();
                continue;
            }
            // continue a partial bin first
            if let Some((content, used_cells)) = partial.as_mut() {
                let room = &cap_big - &*used_cells;
                let take = left.clone().min(room.clone());
                if take > BigUint::zero() {
                    content.push((ctype.clone(), take.clone()));
                    *used_cells += &take;
                    left -= &take;
                }
                if *used_cells == cap_big {
                    let (content, _) = partial.take().expect("present");
                    let key = format!("{}+{:?}", parents[pi].0, content);
                    push_type(&mut out, key, BigUint::one());
                    used_in_group += BigUint::one();
                    if used_in_group == *pcount {
                        pi += 1;
                        used_in_group = BigUint::zero();
                    }
                }
                if left.is_zero() {
                    break;
                }
                if partial.is_some() {
                    break; // partial still open means left is zero
                }
                continue;
            }
            let avail_bins = pcount - &used_in_group;
            if avail_bins.is_zero() {
                pi += 1;
                used_in_group = BigUint::zero();
                continue;
            }
            // whole bins filled only with this child type
            let full = (&left / &cap_big).min(avail_bins.clone());
            if full > BigUint::zero() {
                let key = format!("{}+[(\"{}\", {})]", parents[pi].0, ctype, cap_big);
                push_type(&mut out, key, full.clone());
                used_in_group += &full;
                left -= &full * &cap_big;
                continue;
            }
            // open one partial bin
            if left > BigUint::zero() {
                partial = Some((vec![(ctype.clone(), left.clone())], left.clone()));
                left = BigUint::zero();
            }
        }
        if left > BigUint::zero() {
            // no parent room remains: report the child group as its own type
            push_type(&mut out, format!("overflow+{ctype}"), left);
        }
    }
    // close the trailing partial bin
    if let Some((content, _)) = partial.take() {
        if pi < parents.len() {
            let key = format!("{}+{:?}", parents[pi].0, content);
            push_type(&mut out, key, BigUint::one());
            used_in_group += BigUint::one();
        }
    }
    // untouched parent bins keep their bare type
    while pi < parents.len() {
        let (ptype, pcount, _) = &parents[pi];
        let untouched = pcount - &used_in_group;
        if untouched > BigUint::zero() {
            push_type(&mut out, ptype.clone(), untouched);
        }
        pi += 1;
        used_in_group = BigUint::zero();
    }
    out
}

fn push_type(out: &mut Vec<(String, BigUint)>, key: String, count: BigUint) {
    if let Some(slot) = out.iter_mut().find(|(k, _)| *k == key) {
        slot.1 += count;
    } else {
        out.push((key, count));
    }
}

// ---------------------------------------------------------------------
// structured assembly
// ---------------------------------------------------------------------

struct LevelPlan {
    classes: RadiusClasses,
    configs: Vec<Configuration>,
    /// (config index, multiplicity) with positive multiplicity.
    chosen: Vec<(usize, BigInt)>,
}

/// Outcome of assembling the level items.
struct Assembled {
    /// Top-level bins (level 0), extra strip already attached when
    /// `use_strip` was set.
    bins: Vec<PackedBin>,
    /// Children that found no free cell (only when `use_strip` is off).
    overflow: Vec<PackedBin>,
    profit: Rat,
}

const MATERIALIZE_BUDGET: u64 = 200_000;

/// Realizes the rounded configuration multiplicities as a structured
/// packing: level-0 bins hold their configurations, every deeper bin
/// occupies a free grid cell of a shallower bin, and rounding extras go
/// to a dedicated strip stacked on the first bin (or are returned to the
/// caller when `use_strip` is off, as the profit-loss repair wants them).
fn assemble_structured(
    instance: &Instance,
    part: &GapPartition,
    plans: &mut [LevelPlan],
    params: &SchemeParams,
    use_strip: bool,
) -> Result<Assembled> {
    let table = instance.table();
    let table: crate::geometry::CircleTable<'_> =
        table.iter().map(|(k, v)| (*k, *v)).collect();
    let nlevels = plans.len();

    // per-level, per-class cursor over top-profit originals
    let mut cursors: Vec<Vec<ProfitCursor<'_>>> = plans
        .iter()
        .map(|p| p.classes.classes.iter().map(|cl| ProfitCursor::new(instance, cl)).collect())
        .collect();
    // copies still packable per (level, class), capped at the demand
    let mut budget_eta: Vec<Vec<BigInt>> = plans
        .iter()
        .map(|p| {
            let mut eta = vec![BigInt::zero(); p.classes.classes.len()];
            for (c, mult) in &p.chosen {
                for (k, &cnt) in p.configs[*c].counts.iter().enumerate() {
                    eta[k] += BigInt::from(cnt) * mult;
                }
            }
            for (k, cl) in p.classes.classes.iter().enumerate() {
                if eta[k] > cl.demand {
                    eta[k] = cl.demand.clone();
                }
            }
            eta
        })
        .collect();

    // materialize bin nodes level by level
    let mut nodes: Vec<Vec<PackedBin>> = Vec::with_capacity(nlevels);
    let mut profit = Rat::zero();
    let mut total_nodes = 0u64;
    for (j, plan) in plans.iter().enumerate() {
        let (bw, bh) = part.realization_bin(j, params);
        let mut level_nodes = Vec::new();
        for (c, mult) in &plan.chosen {
            let copies = mult.to_u64().ok_or_else(|| {
                Error::Budget("configuration multiplicity too large to materialize".into())
            })?;
            total_nodes = total_nodes.saturating_add(copies);
            if total_nodes > MATERIALIZE_BUDGET {
                return Err(Error::Budget(format!(
                    "assembly would materialize more than {MATERIALIZE_BUDGET} bins"
                )));
            }
            for _ in 0..copies {
                let mut node = PackedBin::empty(
                    Bin { width: bw.clone(), height: bh.clone() },
                    j,
                );
                // fill realization slots with top-profit originals while
                // the class budget lasts
                for (class, x, y) in &plan.configs[*c].realization {
                    if budget_eta[j][*class].is_positive() {
                        if let Some(idx) = cursors[j][*class].next() {
                            let circ = &instance.circles[idx];
                            node.placements.push(Placement {
                                circle: circ.id.clone(),
                                x: x.clone(),
                                y: y.clone(),
                            });
                            profit += &circ.profit;
                            budget_eta[j][*class] -= BigInt::one();
                        }
                    }
                }
                level_nodes.push(node);
            }
        }
        nodes.push(level_nodes);
    }

    // attach children level by level: fill free cells of regular parents,
    // remainder goes to the strip chain (or the overflow list)
    let mut overflow: Vec<PackedBin> = Vec::new();
    for j in (0..nlevels.saturating_sub(1)).rev() {
        let (cw, ch) = part.child_cell(j, params);
        let children = std::mem::take(&mut nodes[j + 1]);
        if children.is_empty() {
            continue;
        }
        let mut queue: std::collections::VecDeque<PackedBin> = children.into();
        for parent in nodes[j].iter_mut() {
            if queue.is_empty() {
                break;
            }
            let want = queue.len() as u64;
            let free = free_cells_limited(
                &parent.bin,
                &parent.placements,
                &table,
                &cw,
                &ch,
                want,
            )?;
            for rect in free {
                let Some(child) = queue.pop_front() else { break };
                parent.cells.push(PackedCell { rect, child });
            }
        }
        overflow.extend(queue);
    }

    let mut bins = std::mem::take(&mut nodes[0]);
    if use_strip && !overflow.is_empty() {
        attach_overflow_strip(&mut bins, overflow, part, params)?;
        overflow = Vec::new();
    }
    Ok(Assembled { bins, overflow, profit })
}

/// Places leftover subbins into a strip of height `eps h'_0` stacked on
/// the first bin. One bin per level is reserved to host the next level's
/// leftovers, mirroring the capacity argument behind the rounding
/// analysis: the strip holds every level-1 extra plus one spare bin, and
/// each level-j spare holds the level-(j+1) extras plus one spare.
fn attach_overflow_strip(
    bins: &mut Vec<PackedBin>,
    overflow: Vec<PackedBin>,
    part: &GapPartition,
    params: &SchemeParams,
) -> Result<()> {
    if overflow.is_empty() {
        return Ok(());
    }
    if bins.is_empty() {
        let (bw, bh) = part.realization_bin(0, params);
        bins.push(PackedBin::empty(Bin { width: bw, height: bh }, 0));
    }
    let mut by_level: std::collections::BTreeMap<usize, Vec<PackedBin>> = Default::default();
    for b in overflow {
        if b.level == 0 {
            return Err(Error::Internal("level-0 bins cannot overflow".into()));
        }
        by_level.entry(b.level).or_default().push(b);
    }
    let deepest = *by_level.keys().last().expect("nonempty overflow");

    // build the reserved chain bottom-up: the spare level-j bin carries
    // the level-(j+1) leftovers (and the deeper spare)
    let mut carried: Option<PackedBin> = None;
    for level in (2..=deepest).rev() {
        let mut items = by_level.remove(&level).unwrap_or_default();
        if items.is_empty() && carried.is_none() {
            continue;
        }
        if let Some(c) = carried.take() {
            items.push(c);
        }
        let host_level = level - 1;
        let (bw, bh) = part.realization_bin(host_level, params);
        let mut host = PackedBin::empty(Bin { width: bw, height: bh }, host_level);
        let (cw, ch) = part.child_cell(host_level, params);
        let cols = rat::floor_u64(&(&host.bin.width / &cw));
        let rows = rat::floor_u64(&(&host.bin.height / &ch));
        if cols == 0 || (items.len() as u64) > cols * rows {
            return Err(Error::Internal(format!(
                "extra-bin chain overflow at level {level}"
            )));
        }
        for (pos, child) in items.into_iter().enumerate() {
            let col = (pos as u64) % cols;
            let row = (pos as u64) / cols;
            let x0 = rat::int(col as i64) * &cw;
            let y0 = rat::int(row as i64) * &ch;
            let rect = CellRect { x1: &x0 + &cw, y1: &y0 + &ch, x0, y0 };
            host.cells.push(PackedCell { rect, child });
        }
        carried = Some(host);
    }

    let mut strip_items = by_level.remove(&1).unwrap_or_default();
    if let Some(c) = carried.take() {
        strip_items.push(c);
    }
    let root = &mut bins[0];
    let strip_h = &params.eps * &part.geometry[0].h_aug;
    let strip_base = root.bin.height.clone();
    let (cw, ch) = part.child_cell(0, params);
    let cols = rat::floor_u64(&(&root.bin.width / &cw));
    let rows = rat::floor_u64(&(&strip_h / &ch));
    if cols == 0 || (strip_items.len() as u64) > cols * rows {
        return Err(if part.geometry[0].estimate_sound {
            Error::Internal("extra-bin strip overflow at level 1".into())
        } else {
            Error::Param(
                "scale profile too coarse: extra-bin strip overflow at level 1".into(),
            )
        });
    }
    for (pos, child) in strip_items.into_iter().enumerate() {
        let col = (pos as u64) % cols;
        let row = (pos as u64) / cols;
        let x0 = rat::int(col as i64) * &cw;
        let y0 = &strip_base + rat::int(row as i64) * &ch;
        let rect = CellRect { x1: &x0 + &cw, y1: &y0 + &ch, x0, y0 };
        root.cells.push(PackedCell { rect, child });
    }
    root.bin.height = &strip_base + &strip_h;
    Ok(())
}


// ---------------------------------------------------------------------
// drivers
// ---------------------------------------------------------------------

fn medium_for_packing(
    instance: &Instance,
    part: &GapPartition,
) -> Vec<crate::geometry::Circle> {
    // items referenced by side constraints are never packed greedily:
    // leaving them out keeps every constraint satisfied (a, g >= 0)
    let constrained: std::collections::HashSet<&str> = instance
        .constraints
        .iter()
        .flat_map(|q| q.touched_ids())
        .collect();
    let kept: Vec<usize> = part
        .medium
        .iter()
        .copied()
        .filter(|&i| !constrained.contains(instance.circles[i].id.as_str()))
        .collect();
    circles_of(instance, &kept)
}

/// Slices a medium packing into per-knapsack strips of height at most
/// `9 eps h`: each shelf (base `y - r`, recoverable because circles sit
/// at the center of their hulls) is assigned to the strip containing its
/// base, so a strip holds at most `8 eps h` of bases plus one shelf.
fn split_medium_strips(
    medium: &MediumPacking,
    m: u64,
    eps: &Rat,
    h: &Rat,
    instance: &Instance,
) -> Result<Vec<MediumPacking>> {
    if medium.placements.is_empty() {
        return Ok(vec![]);
    }
    let cap = rat::int(8) * eps * h;
    let hard_cap = rat::int(9) * eps * h;
    let by_id: HashMap<&str, Rat> =
        instance.circles.iter().map(|c| (c.id.as_str(), c.radius())).collect();
    let mut strips: std::collections::BTreeMap<u64, MediumPacking> = Default::default();
    for p in &medium.placements {
        let r = by_id
            .get(p.circle.as_str())
            .ok_or_else(|| Error::Input(format!("unknown medium circle {}", p.circle)))?;
        let base = &p.y - r;
        let idx = rat::floor_u64(&(&base / &cap));
        let strip = strips
            .entry(idx)
            .or_insert_with(|| MediumPacking::empty(medium.strip_width.clone()));
        let local_y = &p.y - rat::int(idx as i64) * &cap;
        let top = &local_y + r;
        if top > strip.height {
            strip.height = top;
        }
        strip.placements.push(Placement { circle: p.circle.clone(), x: p.x.clone(), y: local_y });
    }
    if strips.len() as u64 > m {
        return Err(Error::Internal("medium strips exceed the knapsack count".into()));
    }
    let out: Vec<MediumPacking> = strips.into_values().collect();
    for s in &out {
        if s.height > hard_cap {
            return Err(Error::Internal("medium strip exceeds 9 eps h".into()));
        }
    }
    Ok(out)
}


fn attach_medium(bin: &mut PackedBin, strip: &MediumPacking, instance: &Instance) -> Rat {
    let base = bin.bin.height.clone();
    let mut top = base.clone();
    let by_id: HashMap<&str, &crate::geometry::Circle> =
        instance.circles.iter().map(|c| (c.id.as_str(), c)).collect();
    let mut profit = Rat::zero();
    for p in &strip.placements {
        let r = by_id[p.circle.as_str()].radius();
        profit += &by_id[p.circle.as_str()].profit;
        let y = &base + &p.y;
        if &y + &r > top {
            top = &y + &r;
        }
        bin.placements.push(Placement { circle: p.circle.clone(), x: p.x.clone(), y });
    }
    bin.bin.height = top;
    profit
}

fn levels_pipeline(
    instance: &Instance,
    part: &GapPartition,
    variant: Variant,
    params: &SchemeParams,
) -> Result<(Vec<LevelPlan>, Rat, Vec<u64>)> {
    let mut classes = Vec::new();
    let mut configs = Vec::new();
    for (j, members) in part.levels.iter().enumerate() {
        let cls = round_radii(instance, members, j, part, params);
        let cfg = enumerate_configurations(instance, &cls, part, j, params)?;
        classes.push(cls);
        configs.push(cfg);
    }
    let fm = build_frounded(instance, part, &classes, &configs, variant, params)?;
    let balanced = balanced_solve(&fm, instance, params.config_budget)?;
    // the balanced bound: non-null configuration variables per level j >= 1
    for (j, &count) in balanced.nonnull_x.iter().enumerate().skip(1) {
        let t_j = classes[j].count();
        if count > 2 * t_j + 2 {
            return Err(Error::Internal(format!(
                "level {j} has {count} non-null configurations (> 2 T + 2)"
            )));
        }
    }
    let rounded = round_up(&balanced, &fm, &classes, &configs)?;
    let plans: Vec<LevelPlan> = classes
        .into_iter()
        .zip(configs)
        .zip(rounded.per_level.iter())
        .map(|((classes, configs), chosen)| LevelPlan {
            classes,
            configs,
            chosen: chosen.clone(),
        })
        .collect();
    Ok((plans, balanced.objective, rounded.extra_bins))
}

fn best_profit(a: &Option<Packing>, b: &Packing) -> bool {
    match a {
        None => true,
        Some(p) => b.total_profit > p.total_profit,
    }
}

/// The single-knapsack driver; see [`solve_multiknapsack`].
pub fn solve_knapsack(instance: &Instance, params: &SchemeParams) -> Result<Packing> {
    solve_multiknapsack(instance, 1, params)
}

/// End-to-end multiple-knapsack solve: iterates every medium index,
/// packs the medium strip and the level items per candidate, and keeps
/// the verified packing of maximum profit. Instances with `h/w` above
/// the configured ratio bound go through the strip-split transform.
pub fn solve_multiknapsack(instance: &Instance, m: u64, params: &SchemeParams) -> Result<Packing> {
    if m == 0 {
        return Err(Error::Input("m must be at least 1".into()));
    }
    if &instance.bin.height / &instance.bin.width > params.ratio_bound {
        return solve_via_strip_split(instance, m, params);
    }
    let groups = build_groups(instance, params)?;
    let mut best: Option<Packing> = None;
    let mut upper_bound: Option<Rat> = None;

    for t in select_medium_order(params) {
        let part = build_levels(instance, &groups, t, params)?;
        let medium_circles = medium_for_packing(instance, &part);
        let medium = match params.mode {
            Mode::Ptas => MediumPacking::empty(instance.bin.width.clone()),
            _ => {
                let scaled_bin = Bin {
                    width: instance.bin.width.clone(),
                    height: &instance.bin.height * rat::int(m as i64),
                };
                pack_medium(&medium_circles, &scaled_bin, &params.eps)?
            }
        };

        let (mut plans, lp_objective, _extras) =
            levels_pipeline(instance, &part, Variant::Knapsack { m }, params)?;

        // certified upper bound on the optimum: the LP is super-optimal
        // for the non-medium items and the medium class tops the rest
        let t_bound = &lp_objective + profit_of(instance, &part.medium);
        upper_bound = Some(match upper_bound {
            None => t_bound,
            Some(u) => u.min(t_bound),
        });

        let use_strip = params.mode != Mode::Ptas;
        let assembled = assemble_structured(instance, &part, &mut plans, params, use_strip)?;
        let mut bins = assembled.bins;
        let mut profit = assembled.profit;
        let mut repair_loss = Rat::zero();

        if params.mode == Mode::Ptas {
            repair_loss = ptas_repair(&mut bins, assembled.overflow, &part, instance, params)?;
            profit -= &repair_loss;
        } else if m == 1 {
            if bins.is_empty() {
                let (bw, bh) = part.realization_bin(0, params);
                bins.push(PackedBin::empty(Bin { width: bw, height: bh }, 0));
            }
            profit += attach_medium(&mut bins[0], &medium, instance);
        } else {
            let strips =
                split_medium_strips(&medium, m, &params.eps, &instance.bin.height, instance)?;
            for (i, strip) in strips.iter().enumerate() {
                if bins.len() <= i {
                    let (bw, bh) = part.realization_bin(0, params);
                    bins.push(PackedBin::empty(Bin { width: bw, height: bh }, 0));
                }
                profit += attach_medium(&mut bins[i], strip, instance);
            }
        }
        let _ = repair_loss;
        if bins.len() as u64 > m {
            return Err(Error::Internal("more bins than knapsacks".into()));
        }

        let packing = finalize(instance, params, bins, profit, upper_bound.clone())?;
        if best_profit(&best, &packing) {
            best = Some(packing);
        }
    }
    let mut packing = best.ok_or_else(|| Error::Internal("no candidate produced".into()))?;
    packing.profit_upper_bound = upper_bound.map(|u| u.max(packing.total_profit.clone()));
    if let Some(ub) = &packing.profit_upper_bound {
        if ub.is_positive() {
            let gap = ub - &packing.total_profit;
            packing.profit_constant = Some(&gap / (&params.eps * ub));
        } else {
            packing.profit_constant = Some(Rat::zero());
        }
    }
    verify_packing_tree(&packing, instance)?;
    Ok(packing)
}

/// Shrinks every bin and cell to its content's bounding box. Always
/// sound: a shrunken cell is contained in the original free cell, and
/// placements never stick out of their bin by construction. Bins without
/// any content keep their dimensions.
fn shrink_packing(packing: &mut Packing, instance: &Instance) {
    let radii: HashMap<&str, Rat> =
        instance.circles.iter().map(|c| (c.id.as_str(), c.radius())).collect();
    fn rec(bin: &mut PackedBin, radii: &HashMap<&str, Rat>) {
        let mut top = Rat::zero();
        let mut right = Rat::zero();
        for cell in bin.cells.iter_mut() {
            rec(&mut cell.child, radii);
            cell.rect.y1 = (&cell.rect.y0 + &cell.child.bin.height).min(cell.rect.y1.clone());
            cell.rect.x1 = (&cell.rect.x0 + &cell.child.bin.width).min(cell.rect.x1.clone());
            if cell.rect.y1 > top {
                top = cell.rect.y1.clone();
            }
            if cell.rect.x1 > right {
                right = cell.rect.x1.clone();
            }
        }
        for p in &bin.placements {
            if let Some(r) = radii.get(p.circle.as_str()) {
                let t = &p.y + r;
                if t > top {
                    top = t;
                }
                let x = &p.x + r;
                if x > right {
                    right = x;
                }
            }
        }
        if top.is_positive() && top < bin.bin.height {
            bin.bin.height = top;
        }
        if right.is_positive() && right < bin.bin.width {
            bin.bin.width = right;
        }
    }
    for bin in packing.bins.iter_mut() {
        rec(bin, &radii);
    }
}

fn finalize(
    instance: &Instance,
    params: &SchemeParams,
    bins: Vec<PackedBin>,
    profit: Rat,
    upper: Option<Rat>,
) -> Result<Packing> {
    let mut pre = Packing {
        mode: params.mode,
        bins,
        total_profit: profit,
        aug_width: Rat::one(),
        aug_height: Rat::one(),
        height_constant: Rat::zero(),
        profit_upper_bound: upper,
        profit_constant: None,
    };
    shrink_packing(&mut pre, instance);
    let Packing { bins, total_profit: profit, profit_upper_bound: upper, .. } = pre;
    let mut aug_w = Rat::one();
    let mut aug_h = Rat::one();
    for b in &bins {
        let fw = &b.bin.width / &instance.bin.width;
        let fh = &b.bin.height / &instance.bin.height;
        if fw > aug_w {
            aug_w = fw;
        }
        if fh > aug_h {
            aug_h = fh;
        }
    }
    let height_constant = (&aug_h - rat::int(1)) / &params.eps;
    // advertised augmentation envelopes per mode
    match params.mode {
        Mode::Ras => {
            if aug_w > rat::int(1) + &params.eps {
                return Err(Error::Internal("width augmentation exceeds 1 + eps".into()));
            }
            if height_constant > rat::int(1920) {
                return Err(Error::Internal("height augmentation exceeds 1 + 1920 eps".into()));
            }
        }
        Mode::RasOneDim => {
            if aug_w > Rat::one() {
                return Err(Error::Internal("one-dim mode must not widen the bin".into()));
            }
        }
        Mode::Ptas => {
            if aug_w > Rat::one() || aug_h > Rat::one() {
                return Err(Error::Internal("profit-loss mode must not augment".into()));
            }
        }
    }
    Ok(Packing {
        mode: params.mode,
        bins,
        total_profit: profit,
        aug_width: aug_w,
        aug_height: aug_h,
        height_constant,
        profit_upper_bound: upper,
        profit_constant: None,
    })
}

/// Relocates rounding leftovers into still-free cells of the exact-size
/// bins, discarding the cheapest subbins when space runs out. Returns the
/// discarded profit. The resulting bins are exactly the nominal size.
fn ptas_repair(
    bins: &mut [PackedBin],
    overflow: Vec<PackedBin>,
    part: &GapPartition,
    instance: &Instance,
    params: &SchemeParams,
) -> Result<Rat> {
    if overflow.is_empty() {
        return Ok(Rat::zero());
    }
    let table = instance.table();
    let table: crate::geometry::CircleTable<'_> =
        table.iter().map(|(k, v)| (*k, *v)).collect();
    let profit_of_node = |node: &PackedBin| -> Rat {
        flatten_bin(node)
            .iter()
            .map(|p| {
                instance
                    .circles
                    .iter()
                    .find(|c| c.id == p.circle)
                    .map(|c| c.profit.clone())
                    .unwrap_or_else(Rat::zero)
            })
            .sum()
    };
    let mut discarded = Rat::zero();
    let mut by_level: std::collections::BTreeMap<usize, Vec<PackedBin>> = Default::default();
    for b in overflow {
        by_level.entry(b.level).or_default().push(b);
    }
    for (level, mut items) in by_level {
        let (cw, ch) = part.child_cell(level - 1, params);
        // collect free cells beyond the ones already used, across all
        // bins of the previous level
        'place: for parent_bin in bins.iter_mut() {
            if items.is_empty() {
                break;
            }
            if parent_bin.level != level - 1 && level != 1 {
                continue;
            }
            let used: std::collections::HashSet<String> = parent_bin
                .cells
                .iter()
                .map(|c| format!("{},{}", rat::format(&c.rect.x0), rat::format(&c.rect.y0)))
                .collect();
            let want = (items.len() + used.len()) as u64;
            let free = free_cells_limited(
                &parent_bin.bin,
                &parent_bin.placements,
                &table,
                &cw,
                &ch,
                want,
            )?;
            for rect in free {
                if items.is_empty() {
                    break 'place;
                }
                let key = format!("{},{}", rat::format(&rect.x0), rat::format(&rect.y0));
                if used.contains(&key) {
                    continue;
                }
                let child = items.pop().expect("nonempty");
                parent_bin.cells.push(PackedCell { rect, child });
            }
        }
        for leftover in items {
            discarded += profit_of_node(&leftover);
        }
    }
    Ok(discarded)
}

/// The strip-split reduction for tall bins: items move to bins of size
/// `w x w/eps`, `q m` of them with `q = ceil((1 + 4 eps) eps h / w)`.
#[derive(Debug, Clone)]
pub struct StripSplit {
    pub strip_bin: Bin,
    pub q: u64,
}

/// Builds the transformed instance; stacking each group of `q` strip bins
/// recovers a packing of the original bin with height factor
/// `(1 + 4 eps)` times the per-strip augmentation.
pub fn strip_split_transform(
    instance: &Instance,
    params: &SchemeParams,
) -> Result<(Instance, StripSplit)> {
    let w = &instance.bin.width;
    let h = &instance.bin.height;
    let eps = &params.eps;
    let strip_h = w / eps;
    let q_exact = (rat::int(1) + rat::int(4) * eps) * eps * h / w;
    let q = rat::floor_u64(&q_exact.ceil());
    let split = StripSplit { strip_bin: Bin { width: w.clone(), height: strip_h.clone() }, q };
    let transformed = Instance::new(
        split.strip_bin.clone(),
        instance.m.max(1) * q,
        instance.circles.clone(),
        instance.constraints.clone(),
    )?;
    Ok((transformed, split))
}

fn solve_via_strip_split(
    instance: &Instance,
    m: u64,
    params: &SchemeParams,
) -> Result<Packing> {
    let (transformed, split) = strip_split_transform(instance, params)?;
    let inner = solve_multiknapsack(&transformed, m * split.q, params)?;
    // stack groups of q strip bins into one output bin each
    let mut bins: Vec<PackedBin> = Vec::new();
    let mut group: Vec<PackedBin> = Vec::new();
    let mut all = inner.bins.into_iter();
    loop {
        let next = all.next();
        let flush = match &next {
            Some(_) => group.len() as u64 == split.q,
            None => !group.is_empty(),
        };
        if flush {
            let width =
                group.iter().map(|b| b.bin.width.clone()).max().expect("nonempty group");
            let mut stacked = PackedBin::empty(
                Bin { width, height: Rat::zero() },
                0,
            );
            for b in group.drain(..) {
                let base = stacked.bin.height.clone();
                for p in &b.placements {
                    stacked.placements.push(Placement {
                        circle: p.circle.clone(),
                        x: p.x.clone(),
                        y: &base + &p.y,
                    });
                }
                for c in &b.cells {
                    stacked.cells.push(PackedCell {
                        rect: CellRect {
                            x0: c.rect.x0.clone(),
                            y0: &base + &c.rect.y0,
                            x1: c.rect.x1.clone(),
                            y1: &base + &c.rect.y1,
                        },
                        child: c.child.clone(),
                    });
                }
                stacked.bin.height = &base + &b.bin.height;
            }
            bins.push(stacked);
        }
        match next {
            Some(b) => group.push(b),
            None => break,
        }
    }
    let packing = Packing {
        mode: params.mode,
        bins,
        total_profit: inner.total_profit,
        aug_width: inner.aug_width,
        aug_height: Rat::zero(), // recomputed below
        height_constant: Rat::zero(),
        profit_upper_bound: inner.profit_upper_bound,
        profit_constant: inner.profit_constant,
    };
    let mut packing = packing;
    let mut aug_h = Rat::one();
    for b in &packing.bins {
        let fh = &b.bin.height / &instance.bin.height;
        if fh > aug_h {
            aug_h = fh;
        }
    }
    packing.aug_height = aug_h.clone();
    packing.height_constant = (&aug_h - rat::int(1)) / &params.eps;
    verify_packing_tree(&packing, instance)?;
    Ok(packing)
}

/// Bin packing: pack every item into the minimum number of bins, each
/// height-augmented by at most the advertised factor. The medium strip is
/// sliced across the opened bins (new bins only when none exist).
pub fn solve_binpack(instance: &Instance, params: &SchemeParams) -> Result<(Packing, u64)> {
    let groups = build_groups(instance, params)?;
    let mut best: Option<(Packing, u64)> = None;
    for t in select_medium_order(params) {
        let part = build_levels(instance, &groups, t, params)?;
        let medium_circles = circles_of(instance, &part.medium);
        // every medium item must be packed: shelf-pack all hulls, then
        // slice into per-bin strips of height <= 8 eps h
        let hulls: Vec<SquareHull> = medium_circles
            .iter()
            .flat_map(|c| {
                (0..c.multiplicity).map(move |_| SquareHull::of_circle(c))
            })
            .collect();
        let (shelves, _) = nfdh_pack(&hulls, &instance.bin.width)?;
        let mut medium_all = MediumPacking::empty(instance.bin.width.clone());
        for s in &shelves {
            for (id, x_off) in &s.items {
                let c = medium_circles.iter().find(|c| c.id == *id).expect("known");
                let r = c.radius();
                medium_all.placements.push(Placement {
                    circle: id.clone(),
                    x: x_off + &r,
                    y: &s.base_y + &r,
                });
            }
        }
        let strips = split_medium_strips(
            &medium_all,
            u64::MAX,
            &params.eps,
            &instance.bin.height,
            instance,
        )?;

        let (mut plans, _objective, _extras) =
            levels_pipeline(instance, &part, Variant::BinPack, params)?;
        let assembled = assemble_structured(instance, &part, &mut plans, params, true)?;
        let mut bins = assembled.bins;
        let mut profit = assembled.profit;
        for (i, strip) in strips.iter().enumerate() {
            if bins.len() <= i {
                let (bw, bh) = part.realization_bin(0, params);
                bins.push(PackedBin::empty(Bin { width: bw, height: bh }, 0));
            }
            profit += attach_medium(&mut bins[i], strip, instance);
        }
        let count = bins.len() as u64;
        let packing = finalize(instance, params, bins, profit, None)?;
        let better = match &best {
            None => true,
            Some((_, c)) => count < *c,
        };
        if better {
            best = Some((packing, count));
        }
    }
    let (packing, count) = best.ok_or_else(|| Error::Internal("no candidate".into()))?;
    verify_packing_tree(&packing, instance)?;
    Ok((packing, count))
}

/// Certified lower bound on a container side / strip height.
fn length_lower_bound(instance: &Instance, m: u64, width: Option<&Rat>) -> Rat {
    let d_max = instance
        .circles
        .iter()
        .map(|c| c.diameter.clone())
        .max()
        .unwrap_or_else(Rat::zero);
    let area: Rat = instance
        .circles
        .iter()
        .map(|c| c.area_lo() * rat::int(c.multiplicity as i64))
        .sum();
    let other = match width {
        Some(w) => &area / (rat::int(m as i64) * w),
        None => rat::sqrt_floor(&(&area / rat::int(m as i64)), 32),
    };
    d_max.max(other)
}

/// Result of a container / strip solve.
#[derive(Debug, Clone)]
pub struct LengthSolve {
    pub length: Rat,
    pub packing: Packing,
    /// Emitted constant: `length <= (1 + c eps) * (certified lower bound)`.
    pub constant: Rat,
}

fn candidate_lengths(
    instance: &Instance,
    m: u64,
    width: Option<&Rat>,
    params: &SchemeParams,
) -> Result<(Vec<Rat>, Rat)> {
    let lo = length_lower_bound(instance, m, width);
    if lo.is_zero() {
        return Ok((vec![], Rat::zero()));
    }
    let mut out = Vec::new();
    let factor = rat::int(1) + &params.eps;
    let mut cur = lo.clone();
    for _ in 0..200 {
        out.push(cur.clone());
        // stop once NFDH on the hulls certifies that everything fits m
        // bins of this size
        let hulls: Vec<SquareHull> = instance
            .circles
            .iter()
            .flat_map(|c| (0..c.multiplicity).map(move |_| SquareHull::of_circle(c)))
            .collect();
        let bin_w = width.cloned().unwrap_or_else(|| cur.clone());
        if hulls.iter().all(|h| h.side <= bin_w) {
            if let Ok((_, height)) = nfdh_pack(&hulls, &bin_w) {
                if height <= &cur * rat::int(m as i64) {
                    return Ok((out, lo));
                }
            }
        }
        cur *= &factor;
    }
    Err(Error::Budget("no workable candidate length within 200 steps".into()))
}

/// Minimum container: smallest square side such that everything packs
/// into `m` bins. Returns the realized side (including augmentation) and
/// the emitted constant against the certified lower bound.
pub fn solve_container(instance: &Instance, m: u64, params: &SchemeParams) -> Result<LengthSolve> {
    let (cands, lo) = candidate_lengths(instance, m, None, params)?;
    solve_lengths(instance, m, None, cands, lo, params)
}

/// Multiple strip packing: fixed width, smallest height. The pipeline
/// runs in height-only augmentation so the width is exact.
pub fn solve_strip(
    instance: &Instance,
    m: u64,
    width: &Rat,
    params: &SchemeParams,
) -> Result<LengthSolve> {
    let (cands, lo) = candidate_lengths(instance, m, Some(width), params)?;
    solve_lengths(instance, m, Some(width), cands, lo, params)
}

fn solve_lengths(
    instance: &Instance,
    m: u64,
    width: Option<&Rat>,
    cands: Vec<Rat>,
    lower: Rat,
    params: &SchemeParams,
) -> Result<LengthSolve> {
    if cands.is_empty() {
        let packing = Packing {
            mode: params.mode,
            bins: vec![],
            total_profit: Rat::zero(),
            aug_width: Rat::one(),
            aug_height: Rat::one(),
            height_constant: Rat::zero(),
            profit_upper_bound: None,
            profit_constant: None,
        };
        return Ok(LengthSolve { length: Rat::zero(), packing, constant: Rat::zero() });
    }
    let mut sub_params = params.clone();
    sub_params.mode = if width.is_some() { Mode::RasOneDim } else { Mode::Ras };
    for cand in cands {
        let (bw, bh) = match width {
            Some(w) => {
                // snap the height up to a multiple of w/r so the level
                // grids divide evenly (the divisibility assumption)
                let unit = w / rat::int(params.r as i64);
                let c = cand.clone().max(w.clone());
                let c = (&c / &unit).ceil() * &unit;
                (w.clone(), c)
            }
            None => (cand.clone(), cand.clone()),
        };
        let candidate_instance = match Instance::new(
            Bin { width: bw, height: bh },
            m,
            instance.circles.clone(),
            instance.constraints.clone(),
        ) {
            Ok(i) => i,
            Err(_) => continue, // a circle is wider than this candidate
        };
        match try_pack_all(&candidate_instance, m, &sub_params) {
            Ok(Some(packing)) => {
                let mut length = Rat::zero();
                for b in &packing.bins {
                    let l = match width {
                        Some(_) => b.bin.height.clone(),
                        None => b.bin.width.clone().max(b.bin.height.clone()),
                    };
                    if l > length {
                        length = l;
                    }
                }
                if length.is_zero() {
                    length = cand.clone();
                }
                let constant = (&length / &lower - rat::int(1)) / &params.eps;
                return Ok(LengthSolve { length, packing, constant });
            }
            Ok(None) => continue,
            Err(Error::Budget(e)) => return Err(Error::Budget(e)),
            Err(_) => continue,
        }
    }
    Err(Error::Budget("no candidate length admitted a packing".into()))
}

/// Tries to pack the whole instance into at most `m` bins of the
/// instance's bin size (bin-pack pipeline with a bin budget).
fn try_pack_all(instance: &Instance, m: u64, params: &SchemeParams) -> Result<Option<Packing>> {
    let groups = build_groups(instance, params)?;
    for t in select_medium_order(params) {
        let part = build_levels(instance, &groups, t, params)?;
        let medium_circles = circles_of(instance, &part.medium);
        let hulls: Vec<SquareHull> = medium_circles
            .iter()
            .flat_map(|c| (0..c.multiplicity).map(move |_| SquareHull::of_circle(c)))
            .collect();
        let (shelves, _) = nfdh_pack(&hulls, &instance.bin.width)?;
        let mut medium_all = MediumPacking::empty(instance.bin.width.clone());
        for s in &shelves {
            for (id, x_off) in &s.items {
                let c = medium_circles.iter().find(|c| c.id == *id).expect("known");
                let r = c.radius();
                medium_all.placements.push(Placement {
                    circle: id.clone(),
                    x: x_off + &r,
                    y: &s.base_y + &r,
                });
            }
        }
        let strips = match split_medium_strips(
            &medium_all,
            m,
            &params.eps,
            &instance.bin.height,
            instance,
        ) {
            Ok(s) => s,
            Err(_) => continue,
        };

        let mut classes = Vec::new();
        let mut configs = Vec::new();
        let mut failed = false;
        for (j, members) in part.levels.iter().enumerate() {
            let cls = round_radii(instance, members, j, &part, params);
            match enumerate_configurations(instance, &cls, &part, j, params) {
                Ok(cfg) => {
                    classes.push(cls);
                    configs.push(cfg);
                }
                Err(Error::Budget(e)) => return Err(Error::Budget(e)),
                Err(_) => {
                    failed = true;
                    break;
                }
            }
        }
        if failed {
            continue;
        }
        let mut fm = build_frounded(instance, &part, &classes, &configs, Variant::BinPack, params)?;
        // bin budget: b_0 <= m
        let b0 = fm.level_vars[0].b;
        fm.model.rows.push(LpRow {
            name: "budget".into(),
            coeffs: vec![(b0, rat::int(1))],
            sense: Sense::Le,
            rhs: rat::int(m as i64),
            tag: RowTag::Root,
        });
        let balanced = match balanced_solve(&fm, instance, params.config_budget) {
            Ok(b) => b,
            Err(Error::Budget(e)) => return Err(Error::Budget(e)),
            Err(_) => continue,
        };
        let rounded = round_up(&balanced, &fm, &classes, &configs)?;
        let mut plans: Vec<LevelPlan> = classes
            .into_iter()
            .zip(configs)
            .zip(rounded.per_level.iter())
            .map(|((classes, configs), chosen)| LevelPlan { classes, configs, chosen: chosen.clone() })
            .collect();
        let assembled = match assemble_structured(instance, &part, &mut plans, params, true) {
            Ok(a) => a,
            Err(Error::Budget(e)) => return Err(Error::Budget(e)),
            Err(_) => continue,
        };
        let mut bins = assembled.bins;
        if (bins.len() + strips.len().saturating_sub(bins.len())) as u64 > m {
            continue;
        }
        let mut profit = assembled.profit;
        for (i, strip) in strips.iter().enumerate() {
            if bins.len() <= i {
                let (bw, bh) = part.realization_bin(0, params);
                bins.push(PackedBin::empty(Bin { width: bw, height: bh }, 0));
            }
            profit += attach_medium(&mut bins[i], strip, instance);
        }
        if bins.len() as u64 > m {
            continue;
        }
        // every copy must be packed
        let packed: u64 = bins.iter().map(|b| flatten_bin(b).len() as u64).sum();
        let total: u64 = instance.circles.iter().map(|c| c.multiplicity).sum();
        if packed != total {
            continue;
        }
        let packing = finalize(instance, params, bins, profit, None)?;
        verify_packing_tree(&packing, instance)?;
        return Ok(Some(packing));
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Circle;
    use crate::rat::{int, rat};

    fn circle(id: &str, d: Rat, p: i64) -> Circle {
        Circle { id: id.into(), diameter: d, profit: int(p), multiplicity: 1 }
    }

    fn params(eps: Rat, mode: Mode) -> SchemeParams {
        SchemeParams::new(eps, mode).unwrap()
    }

    #[test]
    fn single_full_circle_is_packed() {
        let instance = Instance::new(
            Bin::new(int(1), int(1)).unwrap(),
            1,
            vec![circle("a", int(1), 7)],
            vec![],
        )
        .unwrap();
        let p = params(rat(1, 4), Mode::Ras);
        let got = solve_knapsack(&instance, &p).unwrap();
        assert_eq!(got.total_profit, int(7));
        assert_eq!(got.bins.len(), 1);
        verify_packing_tree(&got, &instance).unwrap();
    }

    #[test]
    fn medium_only_instance_matches_pack_medium() {
        // a circle small enough to be medium for every t would need
        // multiple groups; instead check that packing works when levels
        // are empty for some t
        let d = rat::pow_rat(&rat(1, 4), 4); // group 1: medium when t = 1
        let instance = Instance::new(
            Bin::new(int(1), int(1)).unwrap(),
            1,
            vec![circle("a", d, 5)],
            vec![],
        )
        .unwrap();
        let p = params(rat(1, 4), Mode::Ras);
        let got = solve_knapsack(&instance, &p).unwrap();
        assert_eq!(got.total_profit, int(5));
    }

    #[test]
    fn multiknapsack_m1_equals_knapsack() {
        let instance = Instance::new(
            Bin::new(int(2), int(2)).unwrap(),
            1,
            vec![circle("a", int(2), 3), circle("b", int(1), 1)],
            vec![],
        )
        .unwrap();
        let p = params(rat(1, 4), Mode::Ras);
        let a = solve_knapsack(&instance, &p).unwrap();
        let b = solve_multiknapsack(&instance, 1, &p).unwrap();
        assert_eq!(a.total_profit, b.total_profit);
    }

    #[test]
    fn multiknapsack_packs_everything_with_enough_bins() {
        let instance = Instance::new(
            Bin::new(int(2), int(2)).unwrap(),
            3,
            vec![
                circle("a", int(2), 3),
                circle("b", int(2), 2),
                circle("c", int(2), 1),
            ],
            vec![],
        )
        .unwrap();
        let p = params(rat(1, 4), Mode::Ras);
        let got = solve_multiknapsack(&instance, 3, &p).unwrap();
        assert_eq!(got.total_profit, int(6));
        // the advertised envelope at eps = 1/4 is tall enough that the
        // solver may stack everything into fewer augmented bins
        assert!(got.bins.len() <= 3 && !got.bins.is_empty());
        assert!(got.aug_height <= int(1) + int(1920) * rat(1, 4));
    }

    #[test]
    fn side_constraint_limits_selection() {
        let mut instance = Instance::new(
            Bin::new(int(2), int(2)).unwrap(),
            2,
            vec![circle("a", int(2), 3), circle("b", int(2), 2)],
            vec![],
        )
        .unwrap();
        instance.constraints.push(crate::instance::SideConstraint {
            coeffs: vec![("a".into(), int(1)), ("b".into(), int(1))],
            rhs: int(1),
        });
        let p = params(rat(1, 4), Mode::Ras);
        let got = solve_multiknapsack(&instance, 2, &p).unwrap();
        assert_eq!(got.total_profit, int(3));
    }

    #[test]
    fn strip_split_arithmetic() {
        // h = w / eps exactly: q = ceil(1 + 4 eps) = 2
        let instance = Instance::new(
            Bin::new(int(1), int(4)).unwrap(),
            1,
            vec![circle("a", int(1), 1)],
            vec![],
        )
        .unwrap();
        let p = params(rat(1, 4), Mode::Ras);
        let (transformed, split) = strip_split_transform(&instance, &p).unwrap();
        assert_eq!(split.q, 2);
        assert_eq!(transformed.bin.height, int(4));
        assert_eq!(transformed.m, 2);
        // geometric series check: sum (2 eps)^i h <= 2 eps / (1 - 2 eps) h
        let eps = rat(1, 4);
        let factor = int(2) * &eps / (int(1) - int(2) * &eps);
        let mut acc = Rat::zero();
        let mut term = int(2) * &eps;
        for _ in 0..60 {
            acc += &term;
            term *= int(2) * &eps;
        }
        assert!(acc <= factor);
    }

    #[test]
    fn tall_bin_goes_through_strip_split() {
        let instance = Instance::new(
            Bin::new(int(1), int(8)).unwrap(), // h/w = 8 > r = 4
            1,
            vec![circle("a", int(1), 2)],
            vec![],
        )
        .unwrap();
        let p = params(rat(1, 4), Mode::Ras);
        let got = solve_knapsack(&instance, &p).unwrap();
        assert_eq!(got.total_profit, int(2));
        verify_packing_tree(&got, &instance).unwrap();
    }

    #[test]
    fn binpack_counts_bin_filling_circles() {
        let instance = Instance::new(
            Bin::new(int(2), int(2)).unwrap(),
            1,
            (0..3).map(|i| circle(&format!("c{i}"), int(2), 1)).collect(),
            vec![],
        )
        .unwrap();
        let p = params(rat(1, 4), Mode::Ras);
        let (packing, count) = solve_binpack(&instance, &p).unwrap();
        // height-augmented bins may hold several stacked circles; the
        // count must never exceed the unaugmented optimum
        assert!(count >= 1 && count <= 3);
        assert_eq!(packing.bins.len() as u64, count);
        let placed: usize = packing.bins.iter().map(|b| flatten_bin(b).len()).sum();
        assert_eq!(placed, 3);
    }

    #[test]
    fn binpack_empty_instance() {
        let instance =
            Instance::new(Bin::new(int(1), int(1)).unwrap(), 1, vec![], vec![]).unwrap();
        let p = params(rat(1, 4), Mode::Ras);
        let (_, count) = solve_binpack(&instance, &p).unwrap();
        assert_eq!(count, 0);
    }

    #[test]
    fn container_single_circle() {
        let instance = Instance::new(
            Bin::new(int(2), int(2)).unwrap(),
            1,
            vec![circle("a", int(2), 1)],
            vec![],
        )
        .unwrap();
        let p = params(rat(1, 4), Mode::Ras);
        let got = solve_container(&instance, 1, &p).unwrap();
        // certified lower bound is d; the realized side may carry the
        // pipeline's augmentation, recorded in the emitted constant
        assert!(got.length >= int(2));
        let bound = (int(1) + &got.constant * rat(1, 4)) * int(2);
        assert!(got.length <= bound);
    }

    #[test]
    fn strip_height_emits_constant() {
        let instance = Instance::new(
            Bin::new(int(1), int(1)).unwrap(),
            1,
            vec![circle("a", int(1), 1), circle("b", int(1), 1)],
            vec![],
        )
        .unwrap();
        let p = params(rat(1, 4), Mode::Ras);
        let got = solve_strip(&instance, 1, &int(1), &p).unwrap();
        assert!(got.length >= int(2)); // two stacked unit circles
        let lower = length_lower_bound(&instance, 1, Some(&int(1)));
        assert!(got.length <= (int(1) + &got.constant * rat(1, 4)) * lower);
        // width is exact in strip mode
        for b in &got.packing.bins {
            assert!(b.bin.width <= int(1));
        }
    }

    #[test]
    fn short_description_groups_identical_bins() {
        let bin = PackedBin {
            bin: Bin::new(int(1), int(1)).unwrap(),
            level: 0,
            placements: vec![],
            cells: vec![],
            count: BigUint::from(3u32),
        };
        let packing = Packing {
            mode: Mode::Ras,
            bins: vec![bin.clone(), bin],
            total_profit: Rat::zero(),
            aug_width: Rat::one(),
            aug_height: Rat::one(),
            height_constant: Rat::zero(),
            profit_upper_bound: None,
            profit_constant: None,
        };
        let sd = short_description(&packing);
        assert_eq!(sd.entries.len(), 1);
        assert_eq!(sd.total(), BigUint::from(6u32));
    }

    #[test]
    fn fill_census_two_child_groups_one_parent_group() {
        // one parent group (capacity 4 cells each) filled by two child
        // groups: at most 1 + 2*2 distinct types
        let parents = vec![("P".to_string(), BigUint::from(1_000_000_000u64), 4u64)];
        let children = vec![
            ("A".to_string(), BigUint::from(2_000_000_001u64)),
            ("B".to_string(), BigUint::from(5u64)),
        ];
        let types = fill_census(&parents, &children);
        assert!(types.len() <= 5, "types: {types:?}");
        let total: BigUint = types.iter().map(|(_, c)| c.clone()).sum();
        assert_eq!(total, BigUint::from(1_000_000_000u64));
    }

    #[test]
    fn ptas_mode_keeps_exact_bin() {
        let instance = Instance::new(
            Bin::new(int(2), int(2)).unwrap(),
            1,
            vec![circle("a", int(2), 3), circle("b", int(1), 1)],
            vec![],
        )
        .unwrap();
        let p = params(rat(1, 4), Mode::Ptas);
        let got = solve_knapsack(&instance, &p).unwrap();
        assert_eq!(got.aug_width, Rat::one());
        assert_eq!(got.aug_height, Rat::one());
        // the emitted inequality: profit >= (1 - c eps) upper_bound
        let ub = got.profit_upper_bound.clone().unwrap();
        let c = got.profit_constant.clone().unwrap();
        assert!(got.total_profit >= (int(1) - &c * rat(1, 4)) * ub);
    }

    #[test]
    fn one_dim_mode_never_widens() {
        let instance = Instance::new(
            Bin::new(int(2), int(2)).unwrap(),
            1,
            vec![circle("a", int(2), 3), circle("b", int(1), 1)],
            vec![],
        )
        .unwrap();
        let p = params(rat(1, 4), Mode::RasOneDim);
        let got = solve_knapsack(&instance, &p).unwrap();
        assert_eq!(got.aug_width, Rat::one());
    }
}
