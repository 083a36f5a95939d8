//! Exact-rational 2-D primitives: circles, bins, placements, the
//! overlap-tolerant packing model, the packing verifier, grid cells and the
//! upward-shifting repair.
//!
//! Every feasibility predicate here compares squared distances in exact
//! rational arithmetic; square roots appear only in reported overlap
//! *amounts* and in the shift step, where they are rounded in the direction
//! that keeps the stated guarantee valid.

use crate::rat::{self, Rat};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use std::collections::HashMap;

/// A circle item. `multiplicity` is the demanded number of copies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circle {
    pub id: String,
    pub diameter: Rat,
    pub profit: Rat,
    pub multiplicity: u64,
}

impl Circle {
    pub fn radius(&self) -> Rat {
        &self.diameter / rat::int(2)
    }

    /// Disk area computed with an upper rational bound on pi.
    pub fn area_hi(&self) -> Rat {
        let r = self.radius();
        rat::pi_hi() * &r * &r
    }

    /// Disk area computed with a lower rational bound on pi.
    pub fn area_lo(&self) -> Rat {
        let r = self.radius();
        rat::pi_lo() * &r * &r
    }
}

/// An axis-aligned rectangular bin anchored at the origin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bin {
    pub width: Rat,
    pub height: Rat,
}

impl Bin {
    pub fn new(width: Rat, height: Rat) -> Result<Self> {
        if !width.is_positive() || !height.is_positive() {
            return Err(Error::Input("bin dimensions must be positive".into()));
        }
        Ok(Self { width, height })
    }

    pub fn area(&self) -> Rat {
        &self.width * &self.height
    }
}

/// Center coordinates for one placed copy of a circle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Placement {
    pub circle: String,
    pub x: Rat,
    pub y: Rat,
}

/// Lookup table used by the verifier; maps item id to its circle.
pub type CircleTable<'a> = HashMap<&'a str, &'a Circle>;

/// Builds a [`CircleTable`] from a slice of circles.
pub fn circle_table(circles: &[Circle]) -> CircleTable<'_> {
    circles.iter().map(|c| (c.id.as_str(), c)).collect()
}

/// Which bin wall a boundary violation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Wall {
    Left,
    Right,
    Bottom,
    Top,
}

/// One violation of the 0-packing inequalities, with the exact (rounded-up
/// where irrational) overlap amount.
#[derive(Debug, Clone)]
pub enum Violation {
    /// Placements at these indices are closer than the sum of their radii.
    Pair { a: usize, b: usize, overlap: Rat },
    /// The placement at this index leaves the bin through `wall`.
    Boundary { index: usize, wall: Wall, overlap: Rat },
}

impl Violation {
    pub fn overlap(&self) -> &Rat {
        match self {
            Violation::Pair { overlap, .. } => overlap,
            Violation::Boundary { overlap, .. } => overlap,
        }
    }
}

/// Result of [`verify_packing`].
#[derive(Debug, Clone)]
pub enum Verdict {
    Valid,
    /// `xi_star` is the smallest tolerance making this a valid
    /// tolerance-packing. Pairwise amounts involve a square root and are
    /// rounded up at [`rat::DEFAULT_PRECISION_BITS`]; the valid/invalid
    /// decision itself is always exact.
    Invalid { xi_star: Rat, violations: Vec<Violation> },
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }
}

/// A placement list together with the tolerance it is known to satisfy.
/// Invariants: pairwise distances at least `r_i + r_j - xi` and every
/// center within `xi` of the bin in each direction, all checked exactly.
#[derive(Debug, Clone)]
pub struct XiPacking {
    pub bin: Bin,
    pub placements: Vec<Placement>,
    pub xi: Rat,
}

impl XiPacking {
    /// Checks that `placements` really form a `xi`-packing.
    pub fn new(
        bin: Bin,
        placements: Vec<Placement>,
        xi: Rat,
        circles: &CircleTable<'_>,
    ) -> Result<Self> {
        if xi.is_negative() {
            return Err(Error::Input("xi must be nonnegative".into()));
        }
        let observed = min_xi(&bin, &placements, circles)?;
        if observed > xi {
            return Err(Error::Input(format!(
                "placements form a {}-packing, not a {}-packing",
                rat::format(&observed),
                rat::format(&xi)
            )));
        }
        Ok(Self { bin, placements, xi })
    }
}

fn radius_of(p: &Placement, circles: &CircleTable<'_>) -> Result<Rat> {
    circles
        .get(p.circle.as_str())
        .map(|c| c.radius())
        .ok_or_else(|| Error::Input(format!("placement references unknown circle {}", p.circle)))
}

/// Exact verification of the 0-packing inequalities (tangency allowed).
/// On failure reports every violating pair/wall and the minimal tolerance.
pub fn verify_packing(
    bin: &Bin,
    placements: &[Placement],
    circles: &CircleTable<'_>,
) -> Result<Verdict> {
    let radii: Vec<Rat> = placements
        .iter()
        .map(|p| radius_of(p, circles))
        .collect::<Result<_>>()?;
    let mut violations = Vec::new();
    let mut xi_star = Rat::zero();
    let mut bump = |v: Violation, xi: &mut Rat| {
        if v.overlap() > xi {
            *xi = v.overlap().clone();
        }
        violations.push(v);
    };

    for (i, p) in placements.iter().enumerate() {
        let r = &radii[i];
        // boundary: r - xi <= x <= w - r + xi, same for y
        let left = r - &p.x;
        if left.is_positive() {
            bump(Violation::Boundary { index: i, wall: Wall::Left, overlap: left }, &mut xi_star);
        }
        let right = &p.x + r - &bin.width;
        if right.is_positive() {
            bump(Violation::Boundary { index: i, wall: Wall::Right, overlap: right }, &mut xi_star);
        }
        let bottom = r - &p.y;
        if bottom.is_positive() {
            bump(
                Violation::Boundary { index: i, wall: Wall::Bottom, overlap: bottom },
                &mut xi_star,
            );
        }
        let top = &p.y + r - &bin.height;
        if top.is_positive() {
            bump(Violation::Boundary { index: i, wall: Wall::Top, overlap: top }, &mut xi_star);
        }
    }

    for i in 0..placements.len() {
        for j in (i + 1)..placements.len() {
            let dx = &placements[i].x - &placements[j].x;
            let dy = &placements[i].y - &placements[j].y;
            let dist2 = &dx * &dx + &dy * &dy;
            let rsum = &radii[i] + &radii[j];
            let need2 = &rsum * &rsum;
            if dist2 < need2 {
                // overlap = rsum - dist; rounding the root down rounds the
                // reported amount up, so the packing is a xi_star-packing
                let dist = rat::sqrt_floor(&dist2, rat::DEFAULT_PRECISION_BITS);
                let overlap = &rsum - &dist;
                bump(Violation::Pair { a: i, b: j, overlap }, &mut xi_star);
            }
        }
    }

    if violations.is_empty() {
        Ok(Verdict::Valid)
    } else {
        Ok(Verdict::Invalid { xi_star, violations })
    }
}

/// Smallest tolerance making the placements a valid tolerance-packing
/// (0 when they already form a packing).
pub fn min_xi(bin: &Bin, placements: &[Placement], circles: &CircleTable<'_>) -> Result<Rat> {
    Ok(match verify_packing(bin, placements, circles)? {
        Verdict::Valid => Rat::zero(),
        Verdict::Invalid { xi_star, .. } => xi_star,
    })
}

/// Output of [`shift_repair`]: a valid packing in a height-augmented bin.
/// `lifts[i]` is the upward displacement applied to `placements[i]` so
/// callers can re-place any structures (free cells, subbins) that the
/// shift displaced.
#[derive(Debug, Clone)]
pub struct RepairedPacking {
    pub bin: Bin,
    pub placements: Vec<Placement>,
    pub lifts: Vec<Rat>,
}

/// Turns a tolerance-packing with `xi <= eps * h` into a valid 0-packing in
/// a bin of unchanged width and height at most `(1 + n*sqrt(6 eps)) h`
/// (with the root rounded up at `precision_bits`).
///
/// Circles are clamped horizontally into the bin, lifted uniformly by `xi`,
/// and then lifted by `k * sqrt(6 eps) h` in increasing order of original
/// center height (ties by item id, then input order), so all movement
/// beyond the clamp is upward and the augmentation is height-only.
pub fn shift_repair(
    packing: &XiPacking,
    eps: &Rat,
    circles: &CircleTable<'_>,
    precision_bits: u32,
) -> Result<RepairedPacking> {
    if !eps.is_positive() {
        return Err(Error::Input("eps must be positive".into()));
    }
    let bin = &packing.bin;
    if packing.xi > eps * &bin.height {
        return Err(Error::Input(format!(
            "xi = {} exceeds eps * h = {}",
            rat::format(&packing.xi),
            rat::format(&(eps * &bin.height))
        )));
    }
    if bin.width > bin.height {
        return Err(Error::Input("shift_repair requires width <= height".into()));
    }
    let radii: Vec<Rat> = packing
        .placements
        .iter()
        .map(|p| radius_of(p, circles))
        .collect::<Result<_>>()?;
    for r in &radii {
        if r + r > bin.width {
            return Err(Error::Input("shift_repair requires diameters <= bin width".into()));
        }
    }

    let n = packing.placements.len();
    if n == 0 || packing.xi.is_zero() {
        return Ok(RepairedPacking {
            bin: bin.clone(),
            placements: packing.placements.to_vec(),
            lifts: vec![Rat::zero(); n],
        });
    }

    let lam = rat::sqrt_ceil(&(rat::int(6) * eps), precision_bits) * &bin.height;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        let pa = &packing.placements[a];
        let pb = &packing.placements[b];
        pa.y.cmp(&pb.y).then_with(|| pa.circle.cmp(&pb.circle)).then(a.cmp(&b))
    });

    let mut placements = packing.placements.to_vec();
    let mut lifts = vec![Rat::zero(); n];
    let mut top = bin.height.clone();
    for (rank, &i) in order.iter().enumerate() {
        let r = &radii[i];
        // clamp horizontally into [r, w - r]
        let x = placements[i].x.clone();
        let x = if &x < r {
            r.clone()
        } else if &x > &(&bin.width - r) {
            &bin.width - r
        } else {
            x
        };
        let lift = &packing.xi + rat::int(rank as i64) * &lam;
        let y = &placements[i].y + &lift;
        if &y + r > top {
            top = &y + r;
        }
        placements[i].x = x;
        placements[i].y = y;
        lifts[i] = lift;
    }

    let out_bin = Bin { width: bin.width.clone(), height: top };
    match verify_packing(&out_bin, &placements, circles)? {
        Verdict::Valid => Ok(RepairedPacking { bin: out_bin, placements, lifts }),
        Verdict::Invalid { xi_star, .. } => Err(Error::Internal(format!(
            "shift_repair produced an invalid packing (xi* = {})",
            rat::format(&xi_star)
        ))),
    }
}

/// One grid cell (closed rectangle).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellRect {
    pub x0: Rat,
    pub y0: Rat,
    pub x1: Rat,
    pub y1: Rat,
}

impl CellRect {
    pub fn width(&self) -> Rat {
        &self.x1 - &self.x0
    }

    pub fn height(&self) -> Rat {
        &self.y1 - &self.y0
    }

    pub fn area(&self) -> Rat {
        self.width() * self.height()
    }
}

/// Exact closed-set test: does the cell intersect the closed disk?
pub fn cell_intersects_disk(cell: &CellRect, cx: &Rat, cy: &Rat, r: &Rat) -> bool {
    // squared distance from the center to the rectangle
    let dx = if cx < &cell.x0 {
        &cell.x0 - cx
    } else if cx > &cell.x1 {
        cx - &cell.x1
    } else {
        Rat::zero()
    };
    let dy = if cy < &cell.y0 {
        &cell.y0 - cy
    } else if cy > &cell.y1 {
        cy - &cell.y1
    } else {
        Rat::zero()
    };
    &dx * &dx + &dy * &dy <= r * r
}

/// Exact test: is the cell entirely inside the closed disk?
/// (A rectangle is inside a disk iff all four corners are.)
pub fn cell_inside_disk(cell: &CellRect, cx: &Rat, cy: &Rat, r: &Rat) -> bool {
    let r2 = r * r;
    for x in [&cell.x0, &cell.x1] {
        for y in [&cell.y0, &cell.y1] {
            let dx = x - cx;
            let dy = y - cy;
            if &dx * &dx + &dy * &dy > r2 {
                return false;
            }
        }
    }
    true
}

/// Number of whole grid columns and rows that fit in the bin.
pub fn grid_dims(bin: &Bin, cell_w: &Rat, cell_h: &Rat) -> Result<(BigInt, BigInt)> {
    if !cell_w.is_positive() || !cell_h.is_positive() {
        return Err(Error::Input("cell dimensions must be positive".into()));
    }
    let nx = (&bin.width / cell_w).floor().to_integer();
    let ny = (&bin.height / cell_h).floor().to_integer();
    Ok((nx, ny))
}

fn grid_dims_u64(bin: &Bin, cell_w: &Rat, cell_h: &Rat) -> Result<(u64, u64)> {
    let (nx, ny) = grid_dims(bin, cell_w, cell_h)?;
    let nx = nx.to_u64().ok_or_else(|| Error::Budget("grid too fine to enumerate".into()))?;
    let ny = ny.to_u64().ok_or_else(|| Error::Budget("grid too fine to enumerate".into()))?;
    Ok((nx, ny))
}

fn cell_at(ix: u64, iy: u64, cell_w: &Rat, cell_h: &Rat) -> CellRect {
    let x0 = rat::int(ix as i64) * cell_w;
    let y0 = rat::int(iy as i64) * cell_h;
    CellRect { x1: &x0 + cell_w, y1: &y0 + cell_h, x0, y0 }
}

/// The full grid over the bin, anchored at the origin, partial cells
/// excluded. Count is `floor(w/cell_w) * floor(h/cell_h)`.
pub fn grid_cells(bin: &Bin, cell_w: &Rat, cell_h: &Rat) -> Result<Vec<CellRect>> {
    let (nx, ny) = grid_dims_u64(bin, cell_w, cell_h)?;
    let mut cells = Vec::with_capacity((nx * ny) as usize);
    for iy in 0..ny {
        for ix in 0..nx {
            cells.push(cell_at(ix, iy, cell_w, cell_h));
        }
    }
    Ok(cells)
}

struct DiskRef {
    cx: Rat,
    cy: Rat,
    r: Rat,
}

/// For one grid row, the inclusive column interval blocked by the disk, or
/// `None` when the disk misses the row band entirely.
fn blocked_cols(disk: &DiskRef, iy: u64, cell_w: &Rat, cell_h: &Rat, nx: u64) -> Option<(u64, u64)> {
    let y0 = rat::int(iy as i64) * cell_h;
    let y1 = &y0 + cell_h;
    if &disk.cy - &disk.r > y1 || &disk.cy + &disk.r < y0 {
        return None;
    }
    // the column containing the center x always intersects the band
    let probe = {
        let q = (&disk.cx / cell_w).floor().to_integer();
        if q.is_negative() {
            0u64
        } else {
            q.to_u64().unwrap_or(u64::MAX).min(nx.saturating_sub(1))
        }
    };
    let row_cell = |ix: u64| cell_at(ix, iy, cell_w, cell_h);
    let hit = |ix: u64| cell_intersects_disk(&row_cell(ix), &disk.cx, &disk.cy, &disk.r);
    if !hit(probe) {
        // disk lies fully outside the grid columns on this row
        return None;
    }
    // binary search the contiguous blocked interval around the probe
    let mut lo = 0u64;
    let mut hi = probe;
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if hit(mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let left = lo;
    let mut lo2 = probe;
    let mut hi2 = nx - 1;
    while lo2 < hi2 {
        let mid = lo2 + (hi2 - lo2).div_ceil(2);
        if hit(mid) {
            lo2 = mid;
        } else {
            hi2 = mid - 1;
        }
    }
    Some((left, lo2))
}

fn gather_disks(placements: &[Placement], circles: &CircleTable<'_>) -> Result<Vec<DiskRef>> {
    placements
        .iter()
        .map(|p| {
            Ok(DiskRef { cx: p.x.clone(), cy: p.y.clone(), r: radius_of(p, circles)? })
        })
        .collect()
}

/// Grid cells whose closed rectangle intersects no placed closed disk
/// (a cell touching a circle's boundary is not free).
pub fn free_cells(
    bin: &Bin,
    placements: &[Placement],
    circles: &CircleTable<'_>,
    cell_w: &Rat,
    cell_h: &Rat,
) -> Result<Vec<CellRect>> {
    free_cells_limited(bin, placements, circles, cell_w, cell_h, u64::MAX)
}

/// As [`free_cells`], scanning rows bottom-up and stopping as soon as
/// `want` free cells have been found. Suitable for very fine grids where
/// materializing every free cell is impossible.
pub fn free_cells_limited(
    bin: &Bin,
    placements: &[Placement],
    circles: &CircleTable<'_>,
    cell_w: &Rat,
    cell_h: &Rat,
    want: u64,
) -> Result<Vec<CellRect>> {
    let (nx, ny) = grid_dims_u64(bin, cell_w, cell_h)?;
    let disks = gather_disks(placements, circles)?;
    let mut out = Vec::new();
    if nx == 0 || ny == 0 || want == 0 {
        return Ok(out);
    }
    for iy in 0..ny {
        // merged blocked intervals for this row
        let mut blocked: Vec<(u64, u64)> = disks
            .iter()
            .filter_map(|d| blocked_cols(d, iy, cell_w, cell_h, nx))
            .collect();
        blocked.sort();
        let mut cursor = 0u64;
        for (lo, hi) in blocked {
            for ix in cursor..lo.min(nx) {
                out.push(cell_at(ix, iy, cell_w, cell_h));
                if out.len() as u64 >= want {
                    return Ok(out);
                }
            }
            cursor = cursor.max(hi + 1);
        }
        for ix in cursor..nx {
            out.push(cell_at(ix, iy, cell_w, cell_h));
            if out.len() as u64 >= want {
                return Ok(out);
            }
        }
    }
    Ok(out)
}

/// Exact count of free cells, row by row, without materializing them.
pub fn count_free_cells(
    bin: &Bin,
    placements: &[Placement],
    circles: &CircleTable<'_>,
    cell_w: &Rat,
    cell_h: &Rat,
) -> Result<BigInt> {
    let (nx, ny) = grid_dims_u64(bin, cell_w, cell_h)?;
    let disks = gather_disks(placements, circles)?;
    let mut free = BigInt::zero();
    for iy in 0..ny {
        let mut blocked: Vec<(u64, u64)> = disks
            .iter()
            .filter_map(|d| blocked_cols(d, iy, cell_w, cell_h, nx))
            .collect();
        blocked.sort();
        let mut cursor = 0u64;
        let mut row_blocked = 0u64;
        for (lo, hi) in blocked {
            let lo = lo.max(cursor);
            if hi >= lo {
                row_blocked += hi - lo + 1;
                cursor = hi + 1;
            }
        }
        free += BigInt::from(nx - row_blocked.min(nx));
    }
    Ok(free)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, rat};

    fn c(id: &str, d: Rat) -> Circle {
        Circle { id: id.into(), diameter: d, profit: int(0), multiplicity: 1 }
    }

    fn place(id: &str, x: Rat, y: Rat) -> Placement {
        Placement { circle: id.into(), x, y }
    }

    #[test]
    fn tangency_is_valid() {
        let circles = vec![c("a", int(2))];
        let table = circle_table(&circles);
        let bin = Bin::new(int(2), int(2)).unwrap();
        let v = verify_packing(&bin, &[place("a", int(1), int(1))], &table).unwrap();
        assert!(v.is_valid());
    }

    #[test]
    fn pair_overlap_amount_is_exact() {
        let circles = vec![c("a", int(2)), c("b", int(2))];
        let table = circle_table(&circles);
        let bin = Bin::new(int(4), int(2)).unwrap();
        let pl = vec![place("a", int(1), int(1)), place("b", rat(5, 2), int(1))];
        match verify_packing(&bin, &pl, &table).unwrap() {
            Verdict::Invalid { xi_star, violations } => {
                assert_eq!(xi_star, rat(1, 2));
                assert_eq!(violations.len(), 1);
            }
            Verdict::Valid => panic!("expected violation"),
        }
    }

    #[test]
    fn boundary_overlap_amount() {
        let circles = vec![c("a", int(2))];
        let table = circle_table(&circles);
        let bin = Bin::new(int(2), int(2)).unwrap();
        let xi = min_xi(&bin, &[place("a", rat(1, 2), int(1))], &table).unwrap();
        assert_eq!(xi, rat(1, 2));
    }

    #[test]
    fn unknown_reference_is_input_error() {
        let circles = vec![c("a", int(2))];
        let table = circle_table(&circles);
        let bin = Bin::new(int(2), int(2)).unwrap();
        assert!(verify_packing(&bin, &[place("zz", int(1), int(1))], &table).is_err());
    }

    #[test]
    fn min_xi_of_two_circles_at_gap_q() {
        // unit radii at distance 2 - 1/8 -> xi* = 1/8 exactly
        let circles = vec![c("a", int(2)), c("b", int(2))];
        let table = circle_table(&circles);
        let bin = Bin::new(int(8), int(8)).unwrap();
        let pl = vec![place("a", int(2), int(2)), place("b", int(2) + rat(15, 8), int(2))];
        assert_eq!(min_xi(&bin, &pl, &table).unwrap(), rat(1, 8));
    }

    #[test]
    fn shift_repair_identity_on_valid_packing() {
        let circles = vec![c("a", int(2))];
        let table = circle_table(&circles);
        let bin = Bin::new(int(2), int(2)).unwrap();
        let pl = vec![place("a", int(1), int(1))];
        let xp = XiPacking::new(bin.clone(), pl.clone(), Rat::zero(), &table).unwrap();
        let rep = shift_repair(&xp, &rat(1, 4), &table, 32).unwrap();
        assert_eq!(rep.bin, bin);
        assert_eq!(rep.placements, pl);
    }

    #[test]
    fn shift_repair_empty() {
        let circles: Vec<Circle> = vec![];
        let table = circle_table(&circles);
        let bin = Bin::new(int(2), int(3)).unwrap();
        let xp = XiPacking { bin: bin.clone(), placements: vec![], xi: rat(1, 8) };
        let rep = shift_repair(&xp, &rat(1, 4), &table, 32).unwrap();
        assert_eq!(rep.bin, bin);
        assert!(rep.placements.is_empty());
    }

    #[test]
    fn shift_repair_fixes_overlaps_within_bound() {
        // two unit circles overlapping by 1/4 in a 4x4 bin
        let circles = vec![c("a", int(2)), c("b", int(2))];
        let table = circle_table(&circles);
        let bin = Bin::new(int(4), int(4)).unwrap();
        let pl = vec![place("a", int(1), int(1)), place("b", int(1) + rat(7, 4), int(1))];
        let xi = min_xi(&bin, &pl, &table).unwrap();
        assert_eq!(xi, rat(1, 4));
        let eps = rat(1, 8); // xi = 1/4 <= eps*h = 1/2
        let xp = XiPacking::new(bin.clone(), pl, xi, &table).unwrap();
        let rep = shift_repair(&xp, &eps, &table, 32).unwrap();
        assert!(verify_packing(&rep.bin, &rep.placements, &table).unwrap().is_valid());
        let bound = (int(1)
            + int(2) * rat::sqrt_ceil(&(int(6) * &eps), 32))
            * &bin.height;
        assert!(rep.bin.height <= bound);
        assert_eq!(rep.bin.width, bin.width);
    }

    #[test]
    fn grid_cells_counts() {
        let bin = Bin::new(int(4), int(4)).unwrap();
        assert_eq!(grid_cells(&bin, &int(1), &int(1)).unwrap().len(), 16);
        assert_eq!(grid_cells(&bin, &int(3), &int(3)).unwrap().len(), 1);
        assert_eq!(grid_cells(&bin, &int(4), &int(4)).unwrap().len(), 1);
        assert!(grid_cells(&bin, &int(0), &int(1)).is_err());
    }

    #[test]
    fn free_cells_empty_and_covered() {
        let circles = vec![c("big", int(4))];
        let table = circle_table(&circles);
        let bin = Bin::new(int(4), int(4)).unwrap();
        let all = free_cells(&bin, &[], &table, &int(1), &int(1)).unwrap();
        assert_eq!(all.len(), 16);
        let none =
            free_cells(&bin, &[place("big", int(2), int(2))], &table, &int(1), &int(1)).unwrap();
        assert_eq!(none.len(), 0);
    }

    #[test]
    fn free_cells_excludes_touching_cells() {
        // circle of radius 1 centered at (1,1) in a 4x4 bin with 1x1 cells:
        // cells [0,2)x[0,2) intersect; cells touching only at x=2 boundary
        // (closed sets) also intersect.
        let circles = vec![c("a", int(2))];
        let table = circle_table(&circles);
        let bin = Bin::new(int(4), int(4)).unwrap();
        let free =
            free_cells(&bin, &[place("a", int(1), int(1))], &table, &int(1), &int(1)).unwrap();
        // blocked: the four cells covering the disk plus the four boundary-
        // touching neighbors at (2,0),(2,1),(0,2),(1,2); the diagonal cell
        // (2,2) is at squared distance 2 > 1 and stays free
        assert_eq!(free.len(), 16 - 8);
        let count = count_free_cells(&bin, &[place("a", int(1), int(1))], &table, &int(1), &int(1))
            .unwrap();
        assert_eq!(count, BigInt::from(16 - 8));
    }

    #[test]
    fn free_cells_limited_stops_early() {
        let circles: Vec<Circle> = vec![];
        let table = circle_table(&circles);
        let bin = Bin::new(int(100), int(100)).unwrap();
        let some = free_cells_limited(&bin, &[], &table, &int(1), &int(1), 7).unwrap();
        assert_eq!(some.len(), 7);
    }

    #[test]
    fn cell_inside_disk_needs_all_corners() {
        let cell = CellRect { x0: int(0), y0: int(0), x1: int(1), y1: int(1) };
        assert!(cell_inside_disk(&cell, &rat(1, 2), &rat(1, 2), &int(1)));
        assert!(!cell_inside_disk(&cell, &rat(1, 2), &rat(1, 2), &rat(1, 2)));
    }
}
