//! Next-Fit-Decreasing-Height shelf packing of square hulls, its
//! closed-form area/height guarantees, and the medium-item packer.

use crate::geometry::{Bin, Circle, Placement};
use crate::rat::{self, Rat};
use crate::{Error, Result};
use num_traits::{One, Signed, Zero};

/// One horizontal shelf: items sit side by side on `base_y`, the shelf is
/// as tall as its first (tallest) item.
#[derive(Debug, Clone)]
pub struct Shelf {
    pub base_y: Rat,
    pub height: Rat,
    /// (item id, x offset of the hull's left edge), left to right.
    pub items: Vec<(String, Rat)>,
}

/// The smallest axis-aligned square containing an item; for circles the
/// side equals the diameter.
#[derive(Debug, Clone)]
pub struct SquareHull {
    pub item: String,
    pub side: Rat,
}

impl SquareHull {
    pub fn of_circle(c: &Circle) -> Self {
        Self { item: c.id.clone(), side: c.diameter.clone() }
    }
}

/// Sorts hulls in non-increasing side order (ties by item id, then input
/// position) — the canonical NFDH order.
fn sorted_hulls(hulls: &[SquareHull]) -> Vec<&SquareHull> {
    let mut refs: Vec<(usize, &SquareHull)> = hulls.iter().enumerate().collect();
    refs.sort_by(|(ia, a), (ib, b)| {
        b.side.cmp(&a.side).then_with(|| a.item.cmp(&b.item)).then(ia.cmp(ib))
    });
    refs.into_iter().map(|(_, h)| h).collect()
}

/// Shelf-packs as many of the (already sorted) hulls as fit under
/// `height_cap` (`None` = unbounded strip). Returns the shelves, the
/// number of hulls packed, and the used height.
fn shelf_pack(
    sorted: &[&SquareHull],
    strip_width: &Rat,
    height_cap: Option<&Rat>,
) -> Result<(Vec<Shelf>, usize, Rat)> {
    let mut shelves: Vec<Shelf> = Vec::new();
    let mut base = Rat::zero();
    let mut cursor = Rat::zero();
    let mut packed = 0usize;
    for h in sorted {
        if !h.side.is_positive() {
            return Err(Error::Input(format!("hull {} has nonpositive side", h.item)));
        }
        if &h.side > strip_width {
            return Err(Error::Input(format!(
                "hull {} is wider than the strip ({} > {})",
                h.item,
                rat::format(&h.side),
                rat::format(strip_width)
            )));
        }
        let open_new = match shelves.last() {
            None => true,
            Some(_) => &cursor + &h.side > *strip_width,
        };
        if open_new {
            if let Some(s) = shelves.last() {
                base = &s.base_y + &s.height;
            }
            if let Some(cap) = height_cap {
                if &base + &h.side > *cap {
                    return Ok((shelves, packed, base));
                }
            }
            shelves.push(Shelf { base_y: base.clone(), height: h.side.clone(), items: vec![] });
            cursor = Rat::zero();
        }
        let shelf = shelves.last_mut().expect("shelf exists");
        shelf.items.push((h.item.clone(), cursor.clone()));
        cursor += &h.side;
        packed += 1;
    }
    let used = shelves.last().map(|s| &s.base_y + &s.height).unwrap_or_else(Rat::zero);
    Ok((shelves, packed, used))
}

/// NFDH into an unbounded strip of the given width. Deterministic:
/// sides non-increasing, ties broken by item id.
pub fn nfdh_pack(hulls: &[SquareHull], strip_width: &Rat) -> Result<(Vec<Shelf>, Rat)> {
    let sorted = sorted_hulls(hulls);
    let (shelves, packed, used) = shelf_pack(&sorted, strip_width, None)?;
    debug_assert_eq!(packed, hulls.len());
    Ok((shelves, used))
}

/// NFDH into a capped bin; packs a prefix of the sorted order and stops at
/// the first hull whose shelf would not fit. Returns shelves and #packed.
pub fn nfdh_pack_capped(
    hulls: &[SquareHull],
    strip_width: &Rat,
    height_cap: &Rat,
) -> Result<(Vec<Shelf>, usize)> {
    let sorted = sorted_hulls(hulls);
    let (shelves, packed, _) = shelf_pack(&sorted, strip_width, Some(height_cap))?;
    Ok((shelves, packed))
}

/// Sufficient height from the volume bound: for hypercubes of side at most
/// `delta` and cross-section widths `widths`, NFDH packs total volume
/// `vol` into height `(vol - delta^d) / prod(widths_i - delta) + delta`.
/// Specialize with `widths = [w]` for two dimensions.
pub fn nfdh_height_bound(total_vol: &Rat, delta: &Rat, widths: &[Rat]) -> Result<Rat> {
    if widths.is_empty() {
        return Err(Error::Input("need at least one cross-section width".into()));
    }
    if delta.is_negative() {
        return Err(Error::Input("delta must be nonnegative".into()));
    }
    let d = widths.len() as u32 + 1;
    let delta_pow = rat::pow_rat(delta, d);
    let mut denom = Rat::one();
    for w in widths {
        if w < delta {
            return Err(Error::Input("every width must be at least delta".into()));
        }
        denom *= w - delta;
    }
    if denom.is_zero() {
        return if *total_vol <= delta_pow {
            Ok(delta.clone())
        } else {
            Err(Error::Input("width equals delta but volume exceeds one item".into()))
        };
    }
    Ok((total_vol - &delta_pow) / denom + delta)
}

/// Harren's occupancy guarantee, two-dimensional form: if NFDH cannot pack
/// everything into the bin, the empty area inside it is at most
/// `delta * (w + h)` (half the perimeter times the side bound).
pub fn nfdh_empty_bound(delta: &Rat, bin: &Bin) -> Rat {
    delta * (&bin.width + &bin.height)
}

/// General-dimension form of the empty-volume bound: `delta * surf / 2`
/// where `surf` is the surface area of the box with the given sides.
pub fn nfdh_empty_bound_d(delta: &Rat, sides: &[Rat]) -> Rat {
    let mut surf = Rat::zero();
    for i in 0..sides.len() {
        let mut face = rat::int(2);
        for (j, s) in sides.iter().enumerate() {
            if j != i {
                face *= s;
            }
        }
        surf += face;
    }
    delta * surf / rat::int(2)
}

/// A packed strip of medium items: a valid circle packing in a strip of
/// width `strip_width` and height `height`.
#[derive(Debug, Clone)]
pub struct MediumPacking {
    pub strip_width: Rat,
    pub height: Rat,
    pub placements: Vec<Placement>,
    pub profit: Rat,
}

impl MediumPacking {
    pub fn empty(strip_width: Rat) -> Self {
        Self { strip_width, height: Rat::zero(), placements: vec![], profit: Rat::zero() }
    }
}

fn center_placements(shelves: &[Shelf], side_of: impl Fn(&str) -> Rat) -> Vec<Placement> {
    let mut out = Vec::new();
    for s in shelves {
        for (id, x_off) in &s.items {
            let side = side_of(id);
            let half = &side / rat::int(2);
            out.push(Placement { circle: id.clone(), x: x_off + &half, y: &s.base_y + &half });
        }
    }
    out
}

/// Packs a high-profit subset of the medium items into a strip of width
/// `w` and height at most `8 eps h`.
///
/// The items are sorted by profit density `p_i / d_i` (ties by id), the
/// longest packable prefix of their square hulls is found by binary search
/// against an intermediate bin of size `(1+eps) w x 4 eps h`, and the
/// packing is then folded back to width `w` by restacking every hull that
/// lies entirely in the rightmost `2 eps w` strip onto a second `4 eps h`
/// band above. Circles sit at the center of their hulls.
pub fn pack_medium(medium: &[Circle], bin: &Bin, eps: &Rat) -> Result<MediumPacking> {
    let w = &bin.width;
    let h = &bin.height;
    if medium.is_empty() {
        return Ok(MediumPacking::empty(w.clone()));
    }
    for c in medium {
        // guaranteed by the gap-structured partition (t >= 1); the fold
        // below is only correct for such small items
        if c.diameter > eps * w {
            return Err(Error::Internal(format!(
                "medium item {} has diameter above eps * w",
                c.id
            )));
        }
    }

    let mut order: Vec<&Circle> = medium.iter().collect();
    order.sort_by(|a, b| {
        let da = &a.profit / &a.diameter;
        let db = &b.profit / &b.diameter;
        db.cmp(&da).then_with(|| a.id.cmp(&b.id))
    });

    let inter_w = (rat::int(1) + eps) * w;
    let inter_h = rat::int(4) * eps * h;
    let inter_area = &inter_w * &inter_h;

    // expand copies along the density order until the cumulative hull area
    // rules out any longer packable prefix
    let mut hulls: Vec<SquareHull> = Vec::new();
    let mut cum = Rat::zero();
    'expand: for c in order {
        for _ in 0..c.multiplicity {
            hulls.push(SquareHull::of_circle(c));
            cum += rat::sq(&c.diameter);
            if cum > inter_area {
                break 'expand;
            }
        }
    }

    let feasible = |j: usize| -> Result<bool> {
        if j == 0 {
            return Ok(true);
        }
        let (_, packed) = nfdh_pack_capped(&hulls[..j], &inter_w, &inter_h)?;
        Ok(packed == j)
    };

    let n = hulls.len();
    let best = if feasible(n)? {
        n
    } else {
        // invariant: feasible(lo), !feasible(hi)
        let mut lo = 0usize;
        let mut hi = n;
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if feasible(mid)? {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    };

    let prefix = &hulls[..best];
    let sorted = sorted_hulls(prefix);
    let (shelves, packed, _) = shelf_pack(&sorted, &inter_w, Some(&inter_h))?;
    if packed != best {
        return Err(Error::Internal("medium prefix no longer packs".into()));
    }

    let side_of = |id: &str| -> Rat {
        medium.iter().find(|c| c.id == id).map(|c| c.diameter.clone()).expect("known id")
    };

    // fold: hulls entirely within x >= (1-eps) w move to a band stacked on
    // top; everything else ends at most at (1-eps) w + eps w = w
    let fold_x = (rat::int(1) - eps) * w;
    let mut kept: Vec<Shelf> = Vec::new();
    let mut moved: Vec<Shelf> = Vec::new();
    for s in &shelves {
        let mut keep = Shelf { base_y: s.base_y.clone(), height: s.height.clone(), items: vec![] };
        let mut mv =
            Shelf { base_y: &s.base_y + &inter_h, height: s.height.clone(), items: vec![] };
        let mut cursor = Rat::zero();
        for (id, x_off) in &s.items {
            if x_off >= &fold_x {
                mv.items.push((id.clone(), cursor.clone()));
                cursor += side_of(id);
            } else {
                keep.items.push((id.clone(), x_off.clone()));
            }
        }
        if !keep.items.is_empty() {
            kept.push(keep);
        }
        if !mv.items.is_empty() {
            moved.push(mv);
        }
    }

    let mut placements = center_placements(&kept, side_of);
    placements.extend(center_placements(&moved, side_of));

    let mut height = Rat::zero();
    for s in kept.iter().chain(moved.iter()) {
        let top = &s.base_y + &s.height;
        if top > height {
            height = top;
        }
    }
    let cap = rat::int(8) * eps * h;
    if height > cap {
        return Err(Error::Internal("medium strip exceeded 8 eps h".into()));
    }

    let profit = placements
        .iter()
        .map(|p| {
            medium
                .iter()
                .find(|c| c.id == p.circle)
                .map(|c| c.profit.clone())
                .expect("known id")
        })
        .sum();

    Ok(MediumPacking { strip_width: w.clone(), height, placements, profit })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{circle_table, verify_packing};
    use crate::rat::{int, rat};

    fn hull(id: &str, side: Rat) -> SquareHull {
        SquareHull { item: id.into(), side }
    }

    #[test]
    fn five_squares_share_one_shelf() {
        // sides 2, 2, 1.9, 1.75, 1.6 in a strip of width 9.4
        let hulls = vec![
            hull("a", int(2)),
            hull("b", int(2)),
            hull("c", rat(19, 10)),
            hull("d", rat(7, 4)),
            hull("e", rat(8, 5)),
        ];
        let (shelves, height) = nfdh_pack(&hulls, &rat(47, 5)).unwrap();
        assert_eq!(shelves.len(), 1);
        assert_eq!(shelves[0].items.len(), 5);
        assert_eq!(height, int(2));
    }

    #[test]
    fn single_square_and_equal_squares() {
        let (_, h) = nfdh_pack(&[hull("a", rat(3, 2))], &int(2)).unwrap();
        assert_eq!(h, rat(3, 2));
        // 7 unit squares in width 3 -> ceil(7/3) = 3 shelves
        let hulls: Vec<SquareHull> = (0..7).map(|i| hull(&format!("s{i}"), int(1))).collect();
        let (shelves, h) = nfdh_pack(&hulls, &int(3)).unwrap();
        assert_eq!(shelves.len(), 3);
        assert_eq!(h, int(3));
    }

    #[test]
    fn oversized_item_is_an_error() {
        assert!(nfdh_pack(&[hull("a", int(3))], &int(2)).is_err());
    }

    #[test]
    fn height_bound_collapses_for_single_item() {
        let delta = rat(1, 2);
        let area = rat(1, 4); // delta^2
        let b = nfdh_height_bound(&area, &delta, &[int(1)]).unwrap();
        assert_eq!(b, delta);
    }

    #[test]
    fn height_bound_near_area_for_tiny_items() {
        // delta -> 0 surrogate: bound approaches area / width
        let area = rat(3, 5);
        let delta = rat(3, 5_000_000);
        let bound = nfdh_height_bound(&area, &delta, &[int(1)]).unwrap();
        let rel = (&bound - &area) / &area;
        assert!(rel < rat(1, 100), "relative gap {}", rat::to_f64(&rel));
        assert!(bound >= area);
    }

    #[test]
    fn height_bound_dominates_real_packings() {
        let sides = [rat(1, 3), rat(1, 4), rat(2, 7), rat(1, 5), rat(1, 3), rat(3, 10)];
        let hulls: Vec<SquareHull> =
            sides.iter().enumerate().map(|(i, s)| hull(&format!("x{i}"), s.clone())).collect();
        let w = int(1);
        let (_, h) = nfdh_pack(&hulls, &w).unwrap();
        let area: Rat = sides.iter().map(rat::sq).sum();
        let delta = sides.iter().max().unwrap().clone();
        let bound = nfdh_height_bound(&area, &delta, &[w]).unwrap();
        assert!(h <= bound, "h = {} bound = {}", rat::to_f64(&h), rat::to_f64(&bound));
    }

    #[test]
    fn empty_bound_examples() {
        let bin = Bin::new(int(1), int(1)).unwrap();
        assert_eq!(nfdh_empty_bound(&Rat::zero(), &bin), Rat::zero());
        assert_eq!(nfdh_empty_bound(&rat(1, 10), &bin), rat(1, 5));
        assert_eq!(nfdh_empty_bound_d(&rat(1, 10), &[int(1), int(1)]), rat(1, 5));
    }

    #[test]
    fn harren_bound_on_failed_prefix() {
        // many small squares into a shallow bin: when NFDH stops, the
        // empty area within the bin respects delta * (w + h)
        let delta = rat(1, 8);
        let hulls: Vec<SquareHull> =
            (0..200).map(|i| hull(&format!("t{i}"), delta.clone())).collect();
        let w = int(1);
        let cap = rat(1, 2);
        let (shelves, packed) = nfdh_pack_capped(&hulls, &w, &cap).unwrap();
        assert!(packed < hulls.len());
        let used_area: Rat =
            shelves.iter().map(|s| int(s.items.len() as i64) * rat(1, 64)).sum();
        let bin = Bin::new(w.clone(), cap.clone()).unwrap();
        let empty = bin.area() - used_area;
        assert!(empty <= nfdh_empty_bound(&delta, &bin));
    }

    #[test]
    fn concatenated_sides_non_increasing() {
        let sides = [rat(1, 3), rat(2, 5), rat(1, 6), rat(1, 3), rat(1, 4)];
        let hulls: Vec<SquareHull> =
            sides.iter().enumerate().map(|(i, s)| hull(&format!("y{i}"), s.clone())).collect();
        let (shelves, _) = nfdh_pack(&hulls, &int(1)).unwrap();
        let mut prev: Option<Rat> = None;
        for s in &shelves {
            for (id, _) in &s.items {
                let side = hulls.iter().find(|h| h.item == *id).unwrap().side.clone();
                if let Some(p) = prev {
                    assert!(side <= p);
                }
                prev = Some(side);
            }
        }
    }

    fn medium_circle(id: &str, d: Rat, p: Rat) -> Circle {
        Circle { id: id.into(), diameter: d, profit: p, multiplicity: 1 }
    }

    #[test]
    fn pack_medium_empty_set() {
        let bin = Bin::new(int(4), int(4)).unwrap();
        let m = pack_medium(&[], &bin, &rat(1, 4)).unwrap();
        assert!(m.placements.is_empty());
        assert!(m.height.is_zero());
    }

    #[test]
    fn pack_medium_single_shelf_takes_everything() {
        let bin = Bin::new(int(4), int(4)).unwrap();
        let eps = rat(1, 4);
        let items: Vec<Circle> =
            (0..3).map(|i| medium_circle(&format!("m{i}"), rat(1, 2), int(1))).collect();
        let m = pack_medium(&items, &bin, &eps).unwrap();
        assert_eq!(m.placements.len(), 3);
        assert_eq!(m.profit, int(3));
        let table = circle_table(&items);
        let strip = Bin::new(m.strip_width.clone(), m.height.clone()).unwrap();
        assert!(verify_packing(&strip, &m.placements, &table).unwrap().is_valid());
        assert!(m.height <= int(8) * &eps * int(4));
    }

    #[test]
    fn pack_medium_respects_multiplicity_expansion() {
        let bin = Bin::new(int(4), int(4)).unwrap();
        let eps = rat(1, 4);
        let items =
            vec![Circle { id: "m".into(), diameter: rat(1, 2), profit: int(1), multiplicity: 5 }];
        let m = pack_medium(&items, &bin, &eps).unwrap();
        assert_eq!(m.placements.len(), 5);
        assert_eq!(m.profit, int(5));
    }

    #[test]
    fn pack_medium_rejects_oversized_item() {
        let bin = Bin::new(int(4), int(4)).unwrap();
        let items = vec![medium_circle("big", int(2), int(1))];
        assert!(pack_medium(&items, &bin, &rat(1, 4)).is_err());
    }
}
