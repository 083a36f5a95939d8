//! Linear programming for the configuration models: a bounded-variable
//! two-phase simplex with Bland's pivot rule (exact rational arithmetic,
//! with an f64 shadow mode for cross-checking), the model builders, the
//! integer-block solver, balanced re-solving and rounding.
//!
//! # Model dump grammar
//!
//! [`dump_model`] emits a plain-text listing for external cross-checks:
//!
//! ```text
//! <sense> <coef> <var> [+ <coef> <var> ...]      objective ("max"/"min")
//! row <name>: <coef> <var> [+ ...] <=|=|>= <rhs>  one line per row
//! bound <var> <= <ub>                             finite upper bounds
//! integer <var> [<var> ...]                       integer block, if any
//! ```
//!
//! Coefficients and right-hand sides are exact `p/q` literals.

use crate::configs::{Configuration, RadiusClasses};
use crate::instance::Instance;
use crate::partition::{GapPartition, SchemeParams};
use crate::rat::{self, Rat};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use std::collections::HashMap;

/// Arithmetic abstraction so the same simplex runs exactly (Rat) or in
/// floating point (shadow mode).
pub trait Scalar: Clone + PartialOrd + std::fmt::Debug {
    fn from_rat(r: &Rat) -> Self;
    fn s_zero() -> Self;
    fn s_add(&self, o: &Self) -> Self;
    fn s_sub(&self, o: &Self) -> Self;
    fn s_mul(&self, o: &Self) -> Self;
    fn s_div(&self, o: &Self) -> Self;
    fn s_is_zero(&self) -> bool;
    fn s_is_pos(&self) -> bool;
    fn s_is_neg(&self) -> bool;
    fn to_rat(&self) -> Rat;
}

impl Scalar for Rat {
    fn from_rat(r: &Rat) -> Self {
        r.clone()
    }
    fn s_zero() -> Self {
        Zero::zero()
    }
    fn s_add(&self, o: &Self) -> Self {
        self + o
    }
    fn s_sub(&self, o: &Self) -> Self {
        self - o
    }
    fn s_mul(&self, o: &Self) -> Self {
        self * o
    }
    fn s_div(&self, o: &Self) -> Self {
        self / o
    }
    fn s_is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn s_is_pos(&self) -> bool {
        self.is_positive()
    }
    fn s_is_neg(&self) -> bool {
        self.is_negative()
    }
    fn to_rat(&self) -> Rat {
        self.clone()
    }
}

const F64_EPS: f64 = 1e-9;

impl Scalar for f64 {
    fn from_rat(r: &Rat) -> Self {
        rat::to_f64(r)
    }
    fn s_zero() -> Self {
        0.0
    }
    fn s_add(&self, o: &Self) -> Self {
        self + o
    }
    fn s_sub(&self, o: &Self) -> Self {
        self - o
    }
    fn s_mul(&self, o: &Self) -> Self {
        self * o
    }
    fn s_div(&self, o: &Self) -> Self {
        self / o
    }
    fn s_is_zero(&self) -> bool {
        self.abs() < F64_EPS
    }
    fn s_is_pos(&self) -> bool {
        *self > F64_EPS
    }
    fn s_is_neg(&self) -> bool {
        *self < -F64_EPS
    }
    fn to_rat(&self) -> Rat {
        Rat::from_float(*self).unwrap_or_else(Rat::zero)
    }
}

/// Row sense.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Eq,
    Ge,
}

/// Optimization direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    Maximize,
    Minimize,
}

/// What a variable stands for; used by the balanced machinery and dumps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VarKind {
    /// Multiplicity of configuration `config` at `level`.
    Config { level: usize, config: usize },
    /// Number of bins opened at `level`.
    BinCount { level: usize },
    /// Selected copies of the circle at instance index `item`.
    Select { item: usize },
    /// Candidate-length indicator (container/strip models).
    Candidate { cand: usize },
}

#[derive(Debug, Clone)]
pub struct LpVar {
    pub name: String,
    pub kind: VarKind,
    /// Upper bound; the lower bound is always 0.
    pub upper: Option<Rat>,
}

/// Which block of the formulation a row belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowTag {
    Level(usize),
    Root,
    Side(usize),
    Coupling,
}

#[derive(Debug, Clone)]
pub struct LpRow {
    pub name: String,
    pub coeffs: Vec<(usize, Rat)>,
    pub sense: Sense,
    pub rhs: Rat,
    pub tag: RowTag,
}

/// A sparse LP/MILP. `integer_block` lists variables kept integral by
/// [`solve_with_integer_block`], with an explicit enumeration bound each.
#[derive(Debug, Clone, Default)]
pub struct LpModel {
    pub variables: Vec<LpVar>,
    pub rows: Vec<LpRow>,
    pub objective_sense: Option<Objective>,
    pub objective: Vec<(usize, Rat)>,
    pub integer_block: Vec<(usize, u64)>,
}

impl LpModel {
    fn new(sense: Objective) -> Self {
        Self { objective_sense: Some(sense), ..Default::default() }
    }

    fn add_var(&mut self, name: String, kind: VarKind, upper: Option<Rat>) -> usize {
        self.variables.push(LpVar { name, kind, upper });
        self.variables.len() - 1
    }

    fn add_row(&mut self, name: String, coeffs: Vec<(usize, Rat)>, sense: Sense, rhs: Rat, tag: RowTag) -> usize {
        self.rows.push(LpRow { name, coeffs, sense, rhs, tag });
        self.rows.len() - 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// A solved model: values per variable (empty unless optimal).
#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: LpStatus,
    pub values: Vec<Rat>,
    pub objective: Rat,
}

impl LpSolution {
    fn failed(status: LpStatus) -> Self {
        Self { status, values: vec![], objective: Rat::zero() }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum VarState {
    Basic,
    AtLower,
    AtUpper,
}

struct Tableau<S: Scalar> {
    rows: Vec<Vec<S>>,
    basis: Vec<usize>,
    state: Vec<VarState>,
    upper: Vec<Option<S>>,
    value: Vec<S>,
    banned: Vec<bool>,
    obj: Vec<S>,
}

enum LoopOutcome {
    Optimal,
    Unbounded,
}

impl<S: Scalar> Tableau<S> {
    fn ncols(&self) -> usize {
        self.state.len()
    }

    /// One Bland-rule simplex run on the current (maximization) objective
    /// row. Returns when no entering column improves or a ray is found.
    fn run(&mut self) -> Result<LoopOutcome> {
        let mut iterations = 0usize;
        loop {
            iterations += 1;
            if iterations > 2_000_000 {
                return Err(Error::Internal("simplex iteration cap exceeded".into()));
            }
            // entering: smallest eligible index (Bland)
            let mut entering = None;
            for j in 0..self.ncols() {
                if self.banned[j] || self.state[j] == VarState::Basic {
                    continue;
                }
                let rc = &self.obj[j];
                let eligible = match self.state[j] {
                    VarState::AtLower => rc.s_is_pos(),
                    VarState::AtUpper => rc.s_is_neg(),
                    VarState::Basic => false,
                };
                if eligible {
                    entering = Some(j);
                    break;
                }
            }
            let Some(e) = entering else { return Ok(LoopOutcome::Optimal) };
            let increasing = self.state[e] == VarState::AtLower;

            // ratio test: the entering variable moves by t >= 0
            let mut best_t: Option<S> = None;
            // leaving candidate: (variable index, row, hits_upper)
            let mut leave: Option<(usize, usize, bool)> = None;
            let mut flip = false;
            if let Some(u) = &self.upper[e] {
                best_t = Some(u.clone());
                flip = true;
            }
            for i in 0..self.rows.len() {
                let coef = &self.rows[i][e];
                if coef.s_is_zero() {
                    continue;
                }
                let g = if increasing { coef.clone() } else { S::s_zero().s_sub(coef) };
                let bi = self.basis[i];
                let (t, hits_upper) = if g.s_is_pos() {
                    (self.value[bi].s_div(&g), false)
                } else {
                    match &self.upper[bi] {
                        Some(u) => (u.s_sub(&self.value[bi]).s_div(&S::s_zero().s_sub(&g)), true),
                        None => continue,
                    }
                };
                let tighter = match &best_t {
                    None => true,
                    Some(bt) => {
                        t < *bt
                            || (!(t > *bt)
                                && match &leave {
                                    None => false, // tie with the bound flip: keep the flip
                                    Some((lv, _, _)) => bi < *lv,
                                })
                    }
                };
                if tighter {
                    best_t = Some(t);
                    leave = Some((bi, i, hits_upper));
                    flip = false;
                }
            }

            let Some(t) = best_t else { return Ok(LoopOutcome::Unbounded) };

            // move the entering variable and update basic values
            let delta = if increasing { t.clone() } else { S::s_zero().s_sub(&t) };
            self.value[e] = self.value[e].s_add(&delta);
            for i in 0..self.rows.len() {
                let coef = self.rows[i][e].clone();
                if coef.s_is_zero() {
                    continue;
                }
                let bi = self.basis[i];
                self.value[bi] = self.value[bi].s_sub(&coef.s_mul(&delta));
            }

            if flip {
                self.state[e] =
                    if increasing { VarState::AtUpper } else { VarState::AtLower };
                // snap to the exact bound (removes f64 drift)
                self.value[e] = if self.state[e] == VarState::AtUpper {
                    self.upper[e].clone().expect("flip needs a bound")
                } else {
                    S::s_zero()
                };
                continue;
            }

            let (leaving_var, lrow, hits_upper) = leave.expect("pivot row");
            self.pivot(lrow, e);
            self.state[e] = VarState::Basic;
            self.state[leaving_var] =
                if hits_upper { VarState::AtUpper } else { VarState::AtLower };
            self.value[leaving_var] = if hits_upper {
                self.upper[leaving_var].clone().expect("bound exists")
            } else {
                S::s_zero()
            };
            self.basis[lrow] = e;
        }
    }

    fn pivot(&mut self, lrow: usize, e: usize) {
        let piv = self.rows[lrow][e].clone();
        for v in self.rows[lrow].iter_mut() {
            *v = v.s_div(&piv);
        }
        let pivot_row = self.rows[lrow].clone();
        for i in 0..self.rows.len() {
            if i == lrow {
                continue;
            }
            let factor = self.rows[i][e].clone();
            if factor.s_is_zero() {
                continue;
            }
            for (v, p) in self.rows[i].iter_mut().zip(pivot_row.iter()) {
                *v = v.s_sub(&factor.s_mul(p));
            }
        }
        let factor = self.obj[e].clone();
        if !factor.s_is_zero() {
            for (v, p) in self.obj.iter_mut().zip(pivot_row.iter()) {
                *v = v.s_sub(&factor.s_mul(p));
            }
        }
    }
}

/// Solves the linear relaxation with the two-phase bounded-variable
/// simplex under Bland's anti-cycling rule. Deterministic.
pub fn solve_lp(model: &LpModel) -> Result<LpSolution> {
    solve_relaxation::<Rat>(model)
}

/// Same algorithm in floating point; used by tests to cross-check the
/// exact path. Values are reported as dyadic rationals.
pub fn solve_lp_f64(model: &LpModel) -> Result<LpSolution> {
    solve_relaxation::<f64>(model)
}

fn solve_relaxation<S: Scalar>(model: &LpModel) -> Result<LpSolution> {
    let n = model.variables.len();
    let m = model.rows.len();

    // normalized rows with rhs >= 0
    let mut senses = Vec::with_capacity(m);
    let mut rhs: Vec<Rat> = Vec::with_capacity(m);
    let mut coeffs: Vec<HashMap<usize, Rat>> = Vec::with_capacity(m);
    for row in &model.rows {
        let mut c: HashMap<usize, Rat> = HashMap::new();
        for (j, a) in &row.coeffs {
            if *j >= n {
                return Err(Error::Internal("row references unknown variable".into()));
            }
            let slot = c.entry(*j).or_insert_with(Rat::zero);
            *slot += a;
        }
        let mut s = row.sense;
        let mut b = row.rhs.clone();
        if b.is_negative() {
            for v in c.values_mut() {
                *v = -v.clone();
            }
            b = -b;
            s = match s {
                Sense::Le => Sense::Ge,
                Sense::Ge => Sense::Le,
                Sense::Eq => Sense::Eq,
            };
        }
        senses.push(s);
        rhs.push(b);
        coeffs.push(c);
    }

    // columns: structural, then one slack/surplus per inequality row,
    // then artificials for Ge/Eq rows
    let mut upper: Vec<Option<S>> = model
        .variables
        .iter()
        .map(|v| v.upper.as_ref().map(|u| S::from_rat(u)))
        .collect();
    let mut ncols = n;
    let mut slack_col = vec![usize::MAX; m];
    for (i, s) in senses.iter().enumerate() {
        if matches!(s, Sense::Le | Sense::Ge) {
            slack_col[i] = ncols;
            ncols += 1;
            upper.push(None);
        }
    }
    let mut art_col = vec![usize::MAX; m];
    let mut n_art = 0usize;
    for (i, s) in senses.iter().enumerate() {
        if matches!(s, Sense::Ge | Sense::Eq) {
            art_col[i] = ncols;
            ncols += 1;
            n_art += 1;
            upper.push(None);
        }
    }

    let zero = S::s_zero();
    let mut rows: Vec<Vec<S>> = Vec::with_capacity(m);
    for i in 0..m {
        let mut r = vec![zero.clone(); ncols];
        for (j, a) in &coeffs[i] {
            r[*j] = S::from_rat(a);
        }
        if slack_col[i] != usize::MAX {
            let one = S::from_rat(&rat::int(1));
            r[slack_col[i]] = match senses[i] {
                Sense::Le => one,
                Sense::Ge => zero.s_sub(&one),
                Sense::Eq => unreachable!(),
            };
        }
        if art_col[i] != usize::MAX {
            r[art_col[i]] = S::from_rat(&rat::int(1));
        }
        rows.push(r);
    }

    let mut state = vec![VarState::AtLower; ncols];
    let mut value = vec![zero.clone(); ncols];
    let mut basis = Vec::with_capacity(m);
    for i in 0..m {
        let b = if art_col[i] != usize::MAX { art_col[i] } else { slack_col[i] };
        basis.push(b);
        state[b] = VarState::Basic;
        value[b] = S::from_rat(&rhs[i]);
    }

    let mut t = Tableau {
        rows,
        basis,
        state,
        upper,
        value,
        banned: vec![false; ncols],
        obj: vec![zero.clone(); ncols],
    };

    // phase 1: maximize -sum(artificials); priced-out reduced costs are
    // the column sums over artificial-basic rows
    if n_art > 0 {
        for j in 0..ncols {
            let mut acc = zero.clone();
            for i in 0..m {
                if art_col[i] != usize::MAX {
                    acc = acc.s_add(&t.rows[i][j]);
                }
            }
            t.obj[j] = acc;
        }
        for i in 0..m {
            if art_col[i] != usize::MAX {
                t.obj[art_col[i]] = zero.clone();
            }
        }
        match t.run()? {
            LoopOutcome::Optimal => {}
            LoopOutcome::Unbounded => {
                return Err(Error::Internal("phase 1 cannot be unbounded".into()))
            }
        }
        let mut infeas = zero.clone();
        for i in 0..m {
            if art_col[i] != usize::MAX {
                infeas = infeas.s_add(&t.value[art_col[i]]);
            }
        }
        if !infeas.s_is_zero() {
            return Ok(LpSolution::failed(LpStatus::Infeasible));
        }
        // drive artificials out of the basis (degenerate pivots), then ban
        for i in 0..m {
            let b = t.basis[i];
            if b >= n && art_col.contains(&b) {
                let mut pivoted = false;
                for j in 0..ncols {
                    let is_art = art_col.contains(&j);
                    if !is_art && !t.rows[i][j].s_is_zero() {
                        t.pivot(i, j);
                        t.state[b] = VarState::AtLower;
                        t.value[b] = zero.clone();
                        t.state[j] = VarState::Basic;
                        t.basis[i] = j;
                        pivoted = true;
                        break;
                    }
                }
                if !pivoted {
                    // redundant row: freeze the artificial at zero
                    t.banned[b] = true;
                }
            }
        }
        for i in 0..m {
            if art_col[i] != usize::MAX {
                t.banned[art_col[i]] = true;
            }
        }
    }

    // phase 2 objective (converted to maximization)
    let sense = model.objective_sense.unwrap_or(Objective::Maximize);
    let mut cost = vec![Rat::zero(); ncols];
    for (j, c) in &model.objective {
        let c = if sense == Objective::Minimize { -c.clone() } else { c.clone() };
        cost[*j] += c;
    }
    for j in 0..ncols {
        let mut red = S::from_rat(&cost[j]);
        for i in 0..m {
            let cb = &cost[t.basis[i]];
            if !num_traits::Zero::is_zero(cb) {
                red = red.s_sub(&S::from_rat(cb).s_mul(&t.rows[i][j]));
            }
        }
        t.obj[j] = red;
    }
    for j in 0..ncols {
        if t.state[j] == VarState::Basic {
            t.obj[j] = zero.clone();
        }
    }
    match t.run()? {
        LoopOutcome::Unbounded => return Ok(LpSolution::failed(LpStatus::Unbounded)),
        LoopOutcome::Optimal => {}
    }

    let values: Vec<Rat> = (0..n).map(|j| t.value[j].to_rat()).collect();
    let mut objective = Rat::zero();
    for (j, c) in &model.objective {
        objective += c * &values[*j];
    }
    Ok(LpSolution { status: LpStatus::Optimal, values, objective })
}

/// Which problem the configuration model encodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    /// Maximize selected profit with at most `m` root bins.
    Knapsack { m: u64 },
    /// Pack everything, minimize root bins.
    BinPack,
}

/// Row ids of one level's block.
#[derive(Debug, Clone)]
pub struct LevelRows {
    pub demands: Vec<usize>,
    pub linkage: Vec<usize>,
    pub bins: usize,
    pub free: Option<usize>,
}

/// Variable ids of one level's block.
#[derive(Debug, Clone)]
pub struct LevelVars {
    /// Parallel to the level's configuration list.
    pub x: Vec<usize>,
    /// `(circle index, var id)` per distinct item of the level.
    pub z: Vec<(usize, usize)>,
    pub b: usize,
}

/// The built configuration model plus the block structure needed by the
/// balanced machinery.
#[derive(Debug, Clone)]
pub struct FroundedModel {
    pub model: LpModel,
    pub variant: Variant,
    pub level_vars: Vec<LevelVars>,
    pub level_rows: Vec<LevelRows>,
    pub side_rows: Vec<usize>,
}

/// Builds the configuration LP over all levels: demand rows, selection
/// linkage, bin counting, free-area coupling, the root-bin constraint (or
/// the bin-minimization objective), and any instance side constraints.
pub fn build_frounded(
    instance: &Instance,
    part: &GapPartition,
    classes: &[RadiusClasses],
    configs: &[Vec<Configuration>],
    variant: Variant,
    _params: &SchemeParams,
) -> Result<FroundedModel> {
    if classes.len() != part.levels.len() || configs.len() != part.levels.len() {
        return Err(Error::Internal("per-level inputs out of shape".into()));
    }
    if matches!(variant, Variant::BinPack) && !instance.constraints.is_empty() {
        return Err(Error::Param(
            "side constraints are only supported on knapsack variants".into(),
        ));
    }
    let sense = match variant {
        Variant::Knapsack { .. } => Objective::Maximize,
        Variant::BinPack => Objective::Minimize,
    };
    let mut model = LpModel::new(sense);
    let nlevels = part.levels.len();

    let mut level_vars: Vec<LevelVars> = Vec::with_capacity(nlevels);
    for j in 0..nlevels {
        let x: Vec<usize> = (0..configs[j].len())
            .map(|c| {
                model.add_var(format!("x{j}_{c}"), VarKind::Config { level: j, config: c }, None)
            })
            .collect();
        let z: Vec<(usize, usize)> = if matches!(variant, Variant::Knapsack { .. }) {
            part.levels[j]
                .iter()
                .map(|&i| {
                    let ub = rat::int(instance.circles[i].multiplicity as i64);
                    let v = model.add_var(
                        format!("z_{}", instance.circles[i].id),
                        VarKind::Select { item: i },
                        Some(ub),
                    );
                    (i, v)
                })
                .collect()
        } else {
            vec![]
        };
        let b = model.add_var(format!("b{j}"), VarKind::BinCount { level: j }, None);
        level_vars.push(LevelVars { x, z, b });
    }

    let mut level_rows: Vec<LevelRows> = Vec::with_capacity(nlevels);
    for j in 0..nlevels {
        let mut demands = Vec::new();
        let mut linkage = Vec::new();
        let demand_sense = match variant {
            Variant::Knapsack { .. } => Sense::Le,
            Variant::BinPack => Sense::Eq,
        };
        for (k, class) in classes[j].classes.iter().enumerate() {
            let coeffs: Vec<(usize, Rat)> = configs[j]
                .iter()
                .enumerate()
                .filter(|(_, cfg)| cfg.counts[k] > 0)
                .map(|(c, cfg)| (level_vars[j].x[c], rat::int(cfg.counts[k] as i64)))
                .collect();
            let demand = Rat::from_integer(class.demand.clone());
            demands.push(model.add_row(
                format!("demand{j}_{k}"),
                coeffs.clone(),
                demand_sense,
                demand,
                RowTag::Level(j),
            ));
            if matches!(variant, Variant::Knapsack { .. }) {
                // sum of selected copies equals the packed count
                let mut link = coeffs;
                for v in link.iter_mut() {
                    v.1 = -v.1.clone();
                }
                for &i in &class.members {
                    let var = level_vars[j]
                        .z
                        .iter()
                        .find(|(ci, _)| *ci == i)
                        .map(|(_, v)| *v)
                        .expect("class member has a selection var");
                    link.push((var, rat::int(1)));
                }
                linkage.push(model.add_row(
                    format!("link{j}_{k}"),
                    link,
                    Sense::Eq,
                    Rat::zero(),
                    RowTag::Level(j),
                ));
            }
        }
        // bins row: sum x - b = 0
        let mut bins: Vec<(usize, Rat)> =
            level_vars[j].x.iter().map(|&v| (v, rat::int(1))).collect();
        bins.push((level_vars[j].b, rat::int(-1)));
        let bins_row =
            model.add_row(format!("bins{j}"), bins, Sense::Eq, Rat::zero(), RowTag::Level(j));
        // free-area row toward the next level: sum f_j(C) x_j - b_{j+1} >= 0
        let free = if j + 1 < nlevels {
            let mut coeffs: Vec<(usize, Rat)> = configs[j]
                .iter()
                .enumerate()
                .map(|(c, cfg)| (level_vars[j].x[c], cfg.free_estimate.clone()))
                .collect();
            coeffs.push((level_vars[j + 1].b, rat::int(-1)));
            Some(model.add_row(
                format!("free{j}"),
                coeffs,
                Sense::Ge,
                Rat::zero(),
                RowTag::Level(j),
            ))
        } else {
            None
        };
        level_rows.push(LevelRows { demands, linkage, bins: bins_row, free });
    }

    match variant {
        Variant::Knapsack { m } => {
            let sense = if m == 1 { Sense::Eq } else { Sense::Le };
            model.add_row(
                "root".into(),
                vec![(level_vars[0].b, rat::int(1))],
                sense,
                rat::int(m as i64),
                RowTag::Root,
            );
            let mut obj = Vec::new();
            for lv in &level_vars {
                for &(i, v) in &lv.z {
                    obj.push((v, instance.circles[i].profit.clone()));
                }
            }
            model.objective = obj;
        }
        Variant::BinPack => {
            model.objective = vec![(level_vars[0].b, rat::int(1))];
        }
    }

    // side constraints over selection variables
    let mut side_rows = Vec::new();
    let id_to_var: HashMap<&str, usize> = level_vars
        .iter()
        .flat_map(|lv| lv.z.iter())
        .map(|&(i, v)| (instance.circles[i].id.as_str(), v))
        .collect();
    for (k, q) in instance.constraints.iter().enumerate() {
        let mut coeffs = Vec::new();
        for (id, a) in &q.coeffs {
            if a.is_zero() {
                continue;
            }
            // constrained items that fell into the medium set are simply
            // not selected, which is always safe for a >= 0
            if let Some(&v) = id_to_var.get(id.as_str()) {
                coeffs.push((v, a.clone()));
            }
        }
        side_rows.push(model.add_row(
            format!("side{k}"),
            coeffs,
            Sense::Le,
            q.rhs.clone(),
            RowTag::Side(k),
        ));
    }

    // integer block: level-0 configuration counts, plus any selection
    // variables referenced by side constraints
    let mut block = Vec::new();
    let m_bound = match variant {
        Variant::Knapsack { m } => m,
        Variant::BinPack => instance
            .circles
            .iter()
            .map(|c| c.multiplicity)
            .try_fold(0u64, |acc, m| acc.checked_add(m))
            .unwrap_or(u64::MAX),
    };
    if !level_vars.is_empty() {
        for (c, cfg) in configs[0].iter().enumerate() {
            let mut ub = m_bound;
            for (k, &cnt) in cfg.counts.iter().enumerate() {
                if cnt > 0 {
                    let cap = (&classes[0].classes[k].demand / BigInt::from(cnt))
                        .to_u64()
                        .unwrap_or(u64::MAX);
                    ub = ub.min(cap);
                }
            }
            block.push((level_vars[0].x[c], ub));
        }
    }
    if !instance.constraints.is_empty() {
        let mut touched: Vec<usize> = Vec::new();
        for q in &instance.constraints {
            for id in q.touched_ids() {
                if let Some(&v) = id_to_var.get(id) {
                    if !touched.contains(&v) {
                        touched.push(v);
                    }
                }
            }
        }
        touched.sort();
        for v in touched {
            let ub = match &model.variables[v].upper {
                Some(u) => u.to_integer().to_u64().unwrap_or(u64::MAX),
                None => u64::MAX,
            };
            block.push((v, ub));
        }
    }
    model.integer_block = block;

    Ok(FroundedModel { model, variant, level_vars, level_rows, side_rows })
}

/// Builds the candidate-length model for minimum container / strip
/// variants: per candidate `i` a full configuration block scaled to that
/// length, demand equalities gated by the indicator `y_i`, `b_0 = m y_i`,
/// and `sum y = 1`; the objective picks the smallest workable length.
pub fn build_fmmsb(
    instance: &Instance,
    m: u64,
    candidates: &[Rat],
    per_candidate: &[(GapPartition, Vec<RadiusClasses>, Vec<Vec<Configuration>>)],
    _params: &SchemeParams,
) -> Result<FroundedModel> {
    if candidates.len() != per_candidate.len() {
        return Err(Error::Internal("candidate inputs out of shape".into()));
    }
    let mut model = LpModel::new(Objective::Minimize);
    let mut block = Vec::new();
    let mut y_vars = Vec::new();
    for (i, len) in candidates.iter().enumerate() {
        let y = model.add_var(format!("y{i}"), VarKind::Candidate { cand: i }, Some(rat::int(1)));
        y_vars.push(y);
        model.objective.push((y, len.clone()));
        block.push((y, 1));
    }
    model.add_row(
        "choose_one".into(),
        y_vars.iter().map(|&v| (v, rat::int(1))).collect(),
        Sense::Eq,
        rat::int(1),
        RowTag::Root,
    );

    for (i, (part, classes, configs)) in per_candidate.iter().enumerate() {
        let nlevels = part.levels.len();
        let mut xv: Vec<Vec<usize>> = Vec::new();
        let mut bv: Vec<usize> = Vec::new();
        for j in 0..nlevels {
            xv.push(
                (0..configs[j].len())
                    .map(|c| {
                        model.add_var(
                            format!("x{i}_{j}_{c}"),
                            VarKind::Config { level: j, config: c },
                            None,
                        )
                    })
                    .collect(),
            );
            bv.push(model.add_var(format!("b{i}_{j}"), VarKind::BinCount { level: j }, None));
        }
        for j in 0..nlevels {
            for (k, class) in classes[j].classes.iter().enumerate() {
                let mut coeffs: Vec<(usize, Rat)> = configs[j]
                    .iter()
                    .enumerate()
                    .filter(|(_, cfg)| cfg.counts[k] > 0)
                    .map(|(c, cfg)| (xv[j][c], rat::int(cfg.counts[k] as i64)))
                    .collect();
                let demand = Rat::from_integer(class.demand.clone());
                coeffs.push((y_vars[i], -demand));
                model.add_row(
                    format!("demand{i}_{j}_{k}"),
                    coeffs,
                    Sense::Eq,
                    Rat::zero(),
                    RowTag::Level(j),
                );
            }
            let mut bins: Vec<(usize, Rat)> = xv[j].iter().map(|&v| (v, rat::int(1))).collect();
            bins.push((bv[j], rat::int(-1)));
            model.add_row(format!("bins{i}_{j}"), bins, Sense::Eq, Rat::zero(), RowTag::Level(j));
            if j + 1 < nlevels {
                let mut coeffs: Vec<(usize, Rat)> = configs[j]
                    .iter()
                    .enumerate()
                    .map(|(c, cfg)| (xv[j][c], cfg.free_estimate.clone()))
                    .collect();
                coeffs.push((bv[j + 1], rat::int(-1)));
                model.add_row(
                    format!("free{i}_{j}"),
                    coeffs,
                    Sense::Ge,
                    Rat::zero(),
                    RowTag::Level(j),
                );
            }
        }
        // b_0 = m y_i
        model.add_row(
            format!("root{i}"),
            vec![(bv[0], rat::int(1)), (y_vars[i], rat::int(-(m as i64)))],
            Sense::Eq,
            Rat::zero(),
            RowTag::Root,
        );
        // level-0 configuration counts stay integral
        let total: u64 = instance
            .circles
            .iter()
            .map(|c| c.multiplicity)
            .try_fold(0u64, |acc, mu| acc.checked_add(mu))
            .unwrap_or(u64::MAX);
        for &v in &xv[0] {
            block.push((v, m.max(1).saturating_mul(total.max(1)).min(u64::MAX)));
        }
    }
    model.integer_block = block;
    Ok(FroundedModel {
        model,
        variant: Variant::BinPack,
        level_vars: vec![],
        level_rows: vec![],
        side_rows: vec![],
    })
}

fn is_integral(x: &Rat) -> bool {
    x.is_integer()
}

/// Exhaustive enumeration over the integral block (the level-0
/// configuration counts and any side-constrained selections), solving the
/// LP relaxation of the rest for each assignment and keeping the best.
pub fn solve_with_integer_block(model: &LpModel, budget: u64) -> Result<LpSolution> {
    if model.integer_block.is_empty() {
        return solve_lp(model);
    }
    let sense = model.objective_sense.unwrap_or(Objective::Maximize);
    let block: Vec<(usize, u64)> = model.integer_block.clone();
    let in_block: std::collections::HashSet<usize> = block.iter().map(|&(v, _)| v).collect();

    // rows fully inside the block can prune assignments early
    let block_rows: Vec<&LpRow> = model
        .rows
        .iter()
        .filter(|r| r.coeffs.iter().all(|(v, _)| in_block.contains(v)))
        .collect();

    let mut best: Option<LpSolution> = None;
    let mut assignment = vec![0u64; block.len()];
    let mut visited = 0u64;

    fn rec(
        pos: usize,
        model: &LpModel,
        block: &[(usize, u64)],
        block_rows: &[&LpRow],
        assignment: &mut Vec<u64>,
        best: &mut Option<LpSolution>,
        visited: &mut u64,
        budget: u64,
        sense: Objective,
    ) -> Result<()> {
        // partial pruning on block-only rows
        let assigned: HashMap<usize, u64> = block[..pos]
            .iter()
            .map(|&(v, _)| v)
            .zip(assignment[..pos].iter().copied())
            .collect();
        for row in block_rows {
            let mut lo = Rat::zero();
            let mut open = false;
            for (v, a) in &row.coeffs {
                match assigned.get(v) {
                    Some(&val) => lo += a * rat::int(val as i64),
                    None => open = true,
                }
            }
            // coefficients in our block rows are nonnegative, so the
            // partial sum can only grow
            match row.sense {
                Sense::Le | Sense::Eq if lo > row.rhs => return Ok(()),
                Sense::Eq if !open && lo != row.rhs => return Ok(()),
                Sense::Ge if !open && lo < row.rhs => return Ok(()),
                _ => {}
            }
        }
        if pos == block.len() {
            *visited += 1;
            if *visited > budget {
                return Err(Error::Budget(format!(
                    "integer block enumeration exceeded {budget} assignments"
                )));
            }
            // fix the block: fold values into rhs and drop the columns
            let mut reduced = LpModel {
                variables: model.variables.clone(),
                rows: vec![],
                objective_sense: model.objective_sense,
                objective: vec![],
                integer_block: vec![],
            };
            let fixed: HashMap<usize, Rat> = block
                .iter()
                .map(|&(v, _)| v)
                .zip(assignment.iter().map(|&a| rat::int(a as i64)))
                .collect();
            for (v, val) in &fixed {
                reduced.variables[*v].upper = Some(val.clone());
            }
            let mut obj_const = Rat::zero();
            for (v, c) in &model.objective {
                match fixed.get(v) {
                    Some(val) => obj_const += c * val,
                    None => reduced.objective.push((*v, c.clone())),
                }
            }
            for row in &model.rows {
                let mut coeffs = Vec::new();
                let mut rhs = row.rhs.clone();
                for (v, a) in &row.coeffs {
                    match fixed.get(v) {
                        Some(val) => rhs -= a * val,
                        None => coeffs.push((*v, a.clone())),
                    }
                }
                if coeffs.is_empty() {
                    let ok = match row.sense {
                        Sense::Le => !rhs.is_negative(),
                        Sense::Ge => !rhs.is_positive(),
                        Sense::Eq => rhs.is_zero(),
                    };
                    if !ok {
                        return Ok(());
                    }
                    continue;
                }
                reduced.rows.push(LpRow {
                    name: row.name.clone(),
                    coeffs,
                    sense: row.sense,
                    rhs,
                    tag: row.tag,
                });
            }
            let sol = solve_relaxation::<Rat>(&reduced)?;
            if sol.status != LpStatus::Optimal {
                return Ok(());
            }
            let mut values = sol.values;
            for (v, val) in &fixed {
                values[*v] = val.clone();
            }
            let objective = &sol.objective + &obj_const;
            let better = match best {
                None => true,
                Some(b) => match sense {
                    Objective::Maximize => objective > b.objective,
                    Objective::Minimize => objective < b.objective,
                },
            };
            if better {
                *best = Some(LpSolution { status: LpStatus::Optimal, values, objective });
            }
            return Ok(());
        }
        let (_, ub) = block[pos];
        for val in 0..=ub {
            assignment[pos] = val;
            rec(pos + 1, model, block, block_rows, assignment, best, visited, budget, sense)?;
        }
        assignment[pos] = 0;
        Ok(())
    }

    rec(0, model, &block, &block_rows, &mut assignment, &mut best, &mut visited, budget, sense)?;
    Ok(best.unwrap_or_else(|| LpSolution::failed(LpStatus::Infeasible)))
}

/// Result of the balanced pipeline: same objective as the integer-block
/// optimum, at most `2 T_j + 2` non-null configuration variables per
/// level `j >= 1`.
#[derive(Debug, Clone)]
pub struct BalancedSolution {
    pub values: Vec<Rat>,
    pub objective: Rat,
    /// Non-null configuration variables per level.
    pub nonnull_x: Vec<usize>,
}

/// Two-stage solve: the integer-block optimum fixes the bin counts `b*`
/// (and the per-level shares of any side constraints), then each level
/// block is re-solved alone with its bin count and free-area rows turned
/// into equalities. The objective provably cannot move; this is checked
/// and a mismatch reported as an internal error.
pub fn balanced_solve(
    fm: &FroundedModel,
    instance: &Instance,
    budget: u64,
) -> Result<BalancedSolution> {
    let base = solve_with_integer_block(&fm.model, budget)?;
    if base.status != LpStatus::Optimal {
        return Err(Error::Internal(format!("base model not optimal: {:?}", base.status)));
    }
    let mut values = base.values.clone();
    let nlevels = fm.level_vars.len();
    let mut nonnull_x = vec![0usize; nlevels];

    for j in 1..nlevels {
        let lv = &fm.level_vars[j];
        let lr = &fm.level_rows[j];
        let b_star_j = values[lv.b].clone();
        let b_star_next = if j + 1 < nlevels {
            Some(values[fm.level_vars[j + 1].b].clone())
        } else {
            None
        };

        // fresh block model over this level's x and z variables
        let mut sub = LpModel::new(Objective::Maximize);
        let mut sub_x = Vec::new();
        for (c, &xv) in lv.x.iter().enumerate() {
            let _ = xv;
            sub_x.push(sub.add_var(
                format!("x{c}"),
                VarKind::Config { level: j, config: c },
                None,
            ));
        }
        let mut sub_z: HashMap<usize, usize> = HashMap::new();
        for &(i, _) in &lv.z {
            let ub = rat::int(instance.circles[i].multiplicity as i64);
            let v = sub.add_var(format!("z{i}"), VarKind::Select { item: i }, Some(ub));
            sub_z.insert(i, v);
            sub.objective.push((v, instance.circles[i].profit.clone()));
        }

        // demand and linkage rows are copied with remapped variables
        let remap = |coeffs: &[(usize, Rat)]| -> Vec<(usize, Rat)> {
            coeffs
                .iter()
                .filter_map(|(v, a)| {
                    if let Some(pos) = lv.x.iter().position(|xv| xv == v) {
                        Some((sub_x[pos], a.clone()))
                    } else {
                        lv.z.iter().find(|(_, zv)| zv == v).map(|(i, _)| (sub_z[i], a.clone()))
                    }
                })
                .collect()
        };
        for &ri in &lr.demands {
            let row = &fm.model.rows[ri];
            sub.add_row(row.name.clone(), remap(&row.coeffs), row.sense, row.rhs.clone(), row.tag);
        }
        for &ri in &lr.linkage {
            let row = &fm.model.rows[ri];
            sub.add_row(row.name.clone(), remap(&row.coeffs), row.sense, row.rhs.clone(), row.tag);
        }
        // bins row pinned to b*_j
        sub.add_row(
            "bins".into(),
            sub_x.iter().map(|&v| (v, rat::int(1))).collect(),
            Sense::Eq,
            b_star_j,
            RowTag::Level(j),
        );
        // free-area row pinned to b*_{j+1}, now an equality
        if let (Some(ri), Some(bn)) = (lr.free, b_star_next) {
            let row = &fm.model.rows[ri];
            let coeffs: Vec<(usize, Rat)> = row
                .coeffs
                .iter()
                .filter_map(|(v, a)| {
                    lv.x.iter().position(|xv| xv == v).map(|pos| (sub_x[pos], a.clone()))
                })
                .collect();
            sub.add_row("free".into(), coeffs, Sense::Eq, bn, RowTag::Level(j));
        }
        // side-constraint shares: the level part of each constraint is
        // pinned to its base-solution value; side-constrained selections
        // are integral in the base solution and stay fixed here
        for &ri in &fm.side_rows {
            let row = &fm.model.rows[ri];
            let mut coeffs = Vec::new();
            let mut share = Rat::zero();
            for (v, a) in &row.coeffs {
                if let Some((i, _)) = lv.z.iter().find(|(_, zv)| zv == v) {
                    coeffs.push((sub_z[i], a.clone()));
                    share += a * &values[*v];
                }
            }
            if !coeffs.is_empty() {
                sub.add_row(row.name.clone(), coeffs, Sense::Eq, share, RowTag::Side(0));
            }
        }
        for (v, a) in fm
            .model
            .integer_block
            .iter()
            .filter_map(|&(v, _)| {
                lv.z.iter().find(|(_, zv)| *zv == v).map(|(i, _)| (sub_z[i], values[v].clone()))
            })
            .collect::<Vec<_>>()
        {
            // pin integral side-constrained selections to their base value
            sub.variables[v].upper = Some(a.clone());
            sub.add_row(
                format!("pin{v}"),
                vec![(v, rat::int(1))],
                Sense::Ge,
                a,
                RowTag::Side(0),
            );
        }

        let sol = solve_lp(&sub)?;
        if sol.status != LpStatus::Optimal {
            return Err(Error::Internal(format!(
                "level {j} re-solve reported {:?}; the restriction must stay feasible",
                sol.status
            )));
        }
        for (pos, &xv) in lv.x.iter().enumerate() {
            values[xv] = sol.values[sub_x[pos]].clone();
        }
        for &(i, zv) in &lv.z {
            values[zv] = sol.values[sub_z[&i]].clone();
        }
    }

    // recompute the objective on the merged values and check it matches
    let mut objective = Rat::zero();
    for (v, c) in &fm.model.objective {
        objective += c * &values[*v];
    }
    if objective != base.objective {
        return Err(Error::Internal(format!(
            "balanced objective {} differs from base {}",
            rat::format(&objective),
            rat::format(&base.objective)
        )));
    }
    for (j, lv) in fm.level_vars.iter().enumerate() {
        nonnull_x[j] = lv.x.iter().filter(|&&v| !values[v].is_zero()).count();
    }
    Ok(BalancedSolution { values, objective, nonnull_x })
}

/// Integral configuration multiplicities after rounding a balanced
/// solution up, with per-level extra-bin counts and the per-class packed
/// counts (capped at the demands).
#[derive(Debug, Clone)]
pub struct Rounded {
    /// Per level: (config index, multiplicity) with multiplicity > 0.
    pub per_level: Vec<Vec<(usize, BigInt)>>,
    /// Per level: number of variables that were rounded up (each adds at
    /// most one extra bin over the fractional solution).
    pub extra_bins: Vec<u64>,
    /// Per level, per class: packed copies after rounding, capped at the
    /// class demand.
    pub eta: Vec<Vec<BigInt>>,
}

/// Rounds the configuration variables of a balanced solution up to
/// integers. Level 0 must already be integral (it is solved as the
/// integer block).
pub fn round_up(
    balanced: &BalancedSolution,
    fm: &FroundedModel,
    classes: &[RadiusClasses],
    configs: &[Vec<Configuration>],
) -> Result<Rounded> {
    let mut per_level = Vec::new();
    let mut extra = Vec::new();
    let mut eta_all = Vec::new();
    for (j, lv) in fm.level_vars.iter().enumerate() {
        let mut level = Vec::new();
        let mut rounded_up = 0u64;
        let mut eta = vec![BigInt::zero(); classes[j].classes.len()];
        for (c, &v) in lv.x.iter().enumerate() {
            let x = &balanced.values[v];
            if x.is_negative() {
                return Err(Error::Internal("negative configuration variable".into()));
            }
            if x.is_zero() {
                continue;
            }
            if j == 0 && !is_integral(x) {
                return Err(Error::Internal("level-0 variable left fractional".into()));
            }
            let up = x.ceil().to_integer();
            if !is_integral(x) {
                rounded_up += 1;
            }
            for (k, &cnt) in configs[j][c].counts.iter().enumerate() {
                eta[k] += BigInt::from(cnt) * &up;
            }
            level.push((c, up));
        }
        for (k, class) in classes[j].classes.iter().enumerate() {
            if eta[k] > class.demand {
                eta[k] = class.demand.clone();
            }
        }
        per_level.push(level);
        extra.push(rounded_up);
        eta_all.push(eta);
    }
    Ok(Rounded { per_level, extra_bins: extra, eta: eta_all })
}

/// Plain-text model listing; see the module docs for the grammar.
pub fn dump_model(model: &LpModel) -> String {
    let mut out = String::new();
    let sense = match model.objective_sense.unwrap_or(Objective::Maximize) {
        Objective::Maximize => "max",
        Objective::Minimize => "min",
    };
    let term = |v: usize, c: &Rat| format!("{} {}", rat::format(c), model.variables[v].name);
    let sum = |coeffs: &[(usize, Rat)]| {
        if coeffs.is_empty() {
            "0".to_string()
        } else {
            coeffs.iter().map(|(v, c)| term(*v, c)).collect::<Vec<_>>().join(" + ")
        }
    };
    out.push_str(&format!("{sense} {}\n", sum(&model.objective)));
    for row in &model.rows {
        let op = match row.sense {
            Sense::Le => "<=",
            Sense::Eq => "=",
            Sense::Ge => ">=",
        };
        out.push_str(&format!(
            "row {}: {} {op} {}\n",
            row.name,
            sum(&row.coeffs),
            rat::format(&row.rhs)
        ));
    }
    for v in &model.variables {
        if let Some(u) = &v.upper {
            out.push_str(&format!("bound {} <= {}\n", v.name, rat::format(u)));
        }
    }
    if !model.integer_block.is_empty() {
        let names: Vec<&str> = model
            .integer_block
            .iter()
            .map(|&(v, _)| model.variables[v].name.as_str())
            .collect();
        out.push_str(&format!("integer {}\n", names.join(" ")));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, rat};

    fn simple_model(rows: Vec<(Vec<(usize, Rat)>, Sense, Rat)>, obj: Vec<(usize, Rat)>, nvars: usize, sense: Objective) -> LpModel {
        let mut m = LpModel::new(sense);
        for i in 0..nvars {
            m.add_var(format!("v{i}"), VarKind::Select { item: i }, None);
        }
        for (i, (coeffs, s, rhs)) in rows.into_iter().enumerate() {
            m.add_row(format!("r{i}"), coeffs, s, rhs, RowTag::Coupling);
        }
        m.objective = obj;
        m
    }

    #[test]
    fn single_variable_upper_bound() {
        // max x s.t. x <= 3
        let m = simple_model(
            vec![(vec![(0, int(1))], Sense::Le, int(3))],
            vec![(0, int(1))],
            1,
            Objective::Maximize,
        );
        let sol = solve_lp(&m).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_eq!(sol.objective, int(3));
        assert_eq!(sol.values[0], int(3));
    }

    #[test]
    fn infeasible_and_unbounded_detected() {
        let inf = simple_model(
            vec![
                (vec![(0, int(1))], Sense::Le, int(1)),
                (vec![(0, int(1))], Sense::Ge, int(2)),
            ],
            vec![(0, int(1))],
            1,
            Objective::Maximize,
        );
        assert_eq!(solve_lp(&inf).unwrap().status, LpStatus::Infeasible);
        let unb = simple_model(vec![], vec![(0, int(1))], 1, Objective::Maximize);
        assert_eq!(solve_lp(&unb).unwrap().status, LpStatus::Unbounded);
    }

    #[test]
    fn beale_cycling_example_terminates() {
        // classic degenerate instance that cycles under Dantzig's rule
        let m = simple_model(
            vec![
                (
                    vec![(0, rat(1, 4)), (1, int(-60)), (2, rat(-1, 25)), (3, int(9))],
                    Sense::Le,
                    int(0),
                ),
                (
                    vec![(0, rat(1, 2)), (1, int(-90)), (2, rat(-1, 50)), (3, int(3))],
                    Sense::Le,
                    int(0),
                ),
                (vec![(2, int(1))], Sense::Le, int(1)),
            ],
            vec![(0, rat(3, 4)), (1, int(-150)), (2, rat(1, 50)), (3, int(-6))],
            4,
            Objective::Maximize,
        );
        let sol = solve_lp(&m).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_eq!(sol.objective, rat(1, 20));
    }

    #[test]
    fn equality_and_bounded_vars() {
        // max 2a + b s.t. a + b = 5, a <= 3, b <= 4 (bounds, not rows)
        let mut m = LpModel::new(Objective::Maximize);
        let a = m.add_var("a".into(), VarKind::Select { item: 0 }, Some(int(3)));
        let b = m.add_var("b".into(), VarKind::Select { item: 1 }, Some(int(4)));
        m.add_row("r".into(), vec![(a, int(1)), (b, int(1))], Sense::Eq, int(5), RowTag::Coupling);
        m.objective = vec![(a, int(2)), (b, int(1))];
        let sol = solve_lp(&m).unwrap();
        assert_eq!(sol.objective, int(8));
        assert_eq!(sol.values, vec![int(3), int(2)]);
    }

    #[test]
    fn minimization_works() {
        // min x + y s.t. x + 2y >= 4, 3x + y >= 6
        let m = simple_model(
            vec![
                (vec![(0, int(1)), (1, int(2))], Sense::Ge, int(4)),
                (vec![(0, int(3)), (1, int(1))], Sense::Ge, int(6)),
            ],
            vec![(0, int(1)), (1, int(1))],
            2,
            Objective::Minimize,
        );
        let sol = solve_lp(&m).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        // vertex at x = 8/5, y = 6/5
        assert_eq!(sol.objective, rat(14, 5));
    }

    #[test]
    fn float_shadow_agrees_on_random_models() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for case in 0..30 {
            let nv = rng.gen_range(2..5usize);
            let nr = rng.gen_range(1..4usize);
            let mut rows = Vec::new();
            for _ in 0..nr {
                let coeffs: Vec<(usize, Rat)> =
                    (0..nv).map(|v| (v, int(rng.gen_range(0..4) as i64))).collect();
                let rhs = int(rng.gen_range(1..10) as i64);
                rows.push((coeffs, Sense::Le, rhs));
            }
            let obj: Vec<(usize, Rat)> =
                (0..nv).map(|v| (v, int(rng.gen_range(0..5) as i64))).collect();
            let mut m = simple_model(rows, obj, nv, Objective::Maximize);
            // cap every variable so the model is bounded
            for v in m.variables.iter_mut() {
                v.upper = Some(int(20));
            }
            let exact = solve_lp(&m).unwrap();
            let shadow = solve_lp_f64(&m).unwrap();
            assert_eq!(exact.status, LpStatus::Optimal, "case {case}");
            assert_eq!(shadow.status, LpStatus::Optimal, "case {case}");
            let e = rat::to_f64(&exact.objective);
            let s = rat::to_f64(&shadow.objective);
            let rel = if e.abs() > 1.0 { (e - s).abs() / e.abs() } else { (e - s).abs() };
            assert!(rel < 1e-9, "case {case}: exact {e} shadow {s}");
        }
    }

    #[test]
    fn integer_block_enumeration_and_budget() {
        // max 3x + 2y s.t. x + y <= 4, x integer <= 4
        let mut m = simple_model(
            vec![(vec![(0, int(1)), (1, int(1))], Sense::Le, int(4))],
            vec![(0, int(3)), (1, int(2))],
            2,
            Objective::Maximize,
        );
        m.variables[1].upper = Some(int(2));
        m.integer_block = vec![(0, 4)];
        let sol = solve_with_integer_block(&m, 100).unwrap();
        assert_eq!(sol.objective, int(12)); // x = 4, y = 0
        assert!(matches!(solve_with_integer_block(&m, 2), Err(Error::Budget(_))));
    }

    #[test]
    fn empty_block_equals_plain_lp() {
        let m = simple_model(
            vec![(vec![(0, int(1))], Sense::Le, int(3))],
            vec![(0, int(1))],
            1,
            Objective::Maximize,
        );
        let a = solve_lp(&m).unwrap();
        let b = solve_with_integer_block(&m, 10).unwrap();
        assert_eq!(a.objective, b.objective);
    }

    #[test]
    fn strip_capacity_arithmetic() {
        // eps (w'/w'_1)^2 = r^(4r-3) >= 2 T_1 + 3 under the paper profile
        let r = 4u32;
        let eps = rat(1, 4);
        let w1_over_w = rat::pow_rat(&eps, r * 1 + r - 1); // t = 1
        let bins = &eps / (&w1_over_w * &w1_over_w);
        let t1_bound = (r as f64).powi(3) * (r as f64).ln();
        assert!(rat::to_f64(&bins) >= 2.0 * t1_bound + 3.0);
        assert_eq!(bins, rat::pow_rat(&int(r as i64), 4 * r - 3));
    }

    #[test]
    fn dump_round_trips_visually() {
        let mut m = LpModel::new(Objective::Maximize);
        let x = m.add_var("x0_0".into(), VarKind::Config { level: 0, config: 0 }, None);
        let z = m.add_var("z_a".into(), VarKind::Select { item: 0 }, Some(int(2)));
        m.add_row("demand0_0".into(), vec![(x, int(1))], Sense::Le, int(2), RowTag::Level(0));
        m.add_row(
            "link0_0".into(),
            vec![(z, int(1)), (x, int(-1))],
            Sense::Eq,
            int(0),
            RowTag::Level(0),
        );
        m.objective = vec![(z, rat(5, 2))];
        m.integer_block = vec![(x, 2)];
        let d = dump_model(&m);
        assert!(d.contains("max 5/2 z_a"));
        assert!(d.contains("row demand0_0: 1 x0_0 <= 2"));
        assert!(d.contains("row link0_0: 1 z_a + -1 x0_0 = 0"));
        assert!(d.contains("bound z_a <= 2"));
        assert!(d.contains("integer x0_0"));
    }
}
