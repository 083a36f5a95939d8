//! Exact-rational JSON schemas for instances and solutions, and the
//! conversions to and from the solver types. Files never contain floats;
//! every number is a `"p/q"` string (decimals are accepted on input and
//! converted exactly).

use circlepack::assembler::{PackedBin, PackedCell, Packing, ShortDescription};
use circlepack::geometry::{Bin, CellRect, Circle, Placement};
use circlepack::instance::{Instance, SideConstraint};
use circlepack::partition::Mode;
use circlepack::rat::{self, Rat};
use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

fn parse_rat(s: &str, what: &str) -> Result<Rat, String> {
    rat::parse(s).map_err(|e| format!("{what}: {e}"))
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct BinDto {
    pub w: String,
    pub h: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ItemDto {
    pub id: String,
    pub d: String,
    pub p: String,
    #[serde(default = "one")]
    pub mult: u64,
}

fn one() -> u64 {
    1
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ConstraintDto {
    pub coeffs: BTreeMap<String, String>,
    pub rhs: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct InstanceDto {
    pub bin: BinDto,
    #[serde(default = "one")]
    pub m: u64,
    pub items: Vec<ItemDto>,
    #[serde(default)]
    pub constraints: Vec<ConstraintDto>,
}

impl InstanceDto {
    pub fn to_instance(&self) -> Result<Instance, String> {
        let bin = Bin::new(
            parse_rat(&self.bin.w, "bin.w")?,
            parse_rat(&self.bin.h, "bin.h")?,
        )
        .map_err(|e| e.to_string())?;
        let circles = self
            .items
            .iter()
            .map(|i| {
                Ok(Circle {
                    id: i.id.clone(),
                    diameter: parse_rat(&i.d, "item.d")?,
                    profit: parse_rat(&i.p, "item.p")?,
                    multiplicity: i.mult,
                })
            })
            .collect::<Result<Vec<_>, String>>()?;
        let constraints = self
            .constraints
            .iter()
            .map(|c| {
                let coeffs = c
                    .coeffs
                    .iter()
                    .map(|(id, a)| Ok((id.clone(), parse_rat(a, "constraint coeff")?)))
                    .collect::<Result<Vec<_>, String>>()?;
                Ok(SideConstraint { coeffs, rhs: parse_rat(&c.rhs, "constraint rhs")? })
            })
            .collect::<Result<Vec<_>, String>>()?;
        Instance::new(bin, self.m, circles, constraints).map_err(|e| e.to_string())
    }

    pub fn from_instance(instance: &Instance) -> Self {
        Self {
            bin: BinDto {
                w: rat::format(&instance.bin.width),
                h: rat::format(&instance.bin.height),
            },
            m: instance.m,
            items: instance
                .circles
                .iter()
                .map(|c| ItemDto {
                    id: c.id.clone(),
                    d: rat::format(&c.diameter),
                    p: rat::format(&c.profit),
                    mult: c.multiplicity,
                })
                .collect(),
            constraints: instance
                .constraints
                .iter()
                .map(|q| ConstraintDto {
                    coeffs: q
                        .coeffs
                        .iter()
                        .map(|(id, a)| (id.clone(), rat::format(a)))
                        .collect(),
                    rhs: rat::format(&q.rhs),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct PlacementDto {
    pub id: String,
    pub x: String,
    pub y: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CellDto {
    pub x0: String,
    pub y0: String,
    pub x1: String,
    pub y1: String,
    pub child: BinNodeDto,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct BinNodeDto {
    pub w: String,
    pub h: String,
    pub level: usize,
    #[serde(default = "one_string")]
    pub count: String,
    pub placements: Vec<PlacementDto>,
    #[serde(default)]
    pub cells: Vec<CellDto>,
}

fn one_string() -> String {
    "1".into()
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ParamsEcho {
    pub eps: String,
    pub mode: String,
    pub gamma: String,
    pub seed: u64,
    pub scale_profile: String,
    pub budget: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SolutionDto {
    pub mode: String,
    pub params: ParamsEcho,
    pub profit: String,
    pub aug_width: String,
    pub aug_height: String,
    pub height_constant: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profit_upper_bound: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profit_constant: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bins_used: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub length: Option<String>,
    pub bins: Vec<BinNodeDto>,
    pub selected: Vec<SelectedDto>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub short_description: Option<Vec<TypeDto>>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SelectedDto {
    pub id: String,
    pub count: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct TypeDto {
    pub key: String,
    pub count: String,
}

pub fn mode_name(mode: Mode) -> &'static str {
    match mode {
        Mode::Ras => "ras",
        Mode::RasOneDim => "ras1d",
        Mode::Ptas => "ptas",
    }
}

fn bin_to_dto(bin: &PackedBin) -> BinNodeDto {
    BinNodeDto {
        w: rat::format(&bin.bin.width),
        h: rat::format(&bin.bin.height),
        level: bin.level,
        count: bin.count.to_string(),
        placements: bin
            .placements
            .iter()
            .map(|p| PlacementDto {
                id: p.circle.clone(),
                x: rat::format(&p.x),
                y: rat::format(&p.y),
            })
            .collect(),
        cells: bin
            .cells
            .iter()
            .map(|c| CellDto {
                x0: rat::format(&c.rect.x0),
                y0: rat::format(&c.rect.y0),
                x1: rat::format(&c.rect.x1),
                y1: rat::format(&c.rect.y1),
                child: bin_to_dto(&c.child),
            })
            .collect(),
    }
}

fn dto_to_bin(dto: &BinNodeDto) -> Result<PackedBin, String> {
    Ok(PackedBin {
        bin: Bin {
            width: parse_rat(&dto.w, "bin.w")?,
            height: parse_rat(&dto.h, "bin.h")?,
        },
        level: dto.level,
        count: dto.count.parse::<BigUint>().map_err(|e| format!("count: {e}"))?,
        placements: dto
            .placements
            .iter()
            .map(|p| {
                Ok(Placement {
                    circle: p.id.clone(),
                    x: parse_rat(&p.x, "x")?,
                    y: parse_rat(&p.y, "y")?,
                })
            })
            .collect::<Result<Vec<_>, String>>()?,
        cells: dto
            .cells
            .iter()
            .map(|c| {
                Ok(PackedCell {
                    rect: CellRect {
                        x0: parse_rat(&c.x0, "x0")?,
                        y0: parse_rat(&c.y0, "y0")?,
                        x1: parse_rat(&c.x1, "x1")?,
                        y1: parse_rat(&c.y1, "y1")?,
                    },
                    child: dto_to_bin(&c.child)?,
                })
            })
            .collect::<Result<Vec<_>, String>>()?,
    })
}

pub fn solution_to_dto(
    packing: &Packing,
    echo: ParamsEcho,
    bins_used: Option<u64>,
    length: Option<&Rat>,
    short: Option<&ShortDescription>,
) -> SolutionDto {
    // selected items census from the placement tree
    let mut selected: BTreeMap<String, u64> = BTreeMap::new();
    for bin in &packing.bins {
        for p in circlepack::assembler::flatten_bin(bin) {
            *selected.entry(p.circle.clone()).or_insert(0) += 1;
        }
    }
    SolutionDto {
        mode: mode_name(packing.mode).to_string(),
        params: echo,
        profit: rat::format(&packing.total_profit),
        aug_width: rat::format(&packing.aug_width),
        aug_height: rat::format(&packing.aug_height),
        height_constant: rat::format(&packing.height_constant),
        profit_upper_bound: packing.profit_upper_bound.as_ref().map(rat::format),
        profit_constant: packing.profit_constant.as_ref().map(rat::format),
        bins_used,
        length: length.map(rat::format),
        bins: packing.bins.iter().map(bin_to_dto).collect(),
        selected: selected
            .into_iter()
            .map(|(id, count)| SelectedDto { id, count })
            .collect(),
        short_description: short.map(|s| {
            s.entries
                .iter()
                .map(|(k, c)| TypeDto { key: k.clone(), count: c.to_string() })
                .collect()
        }),
    }
}

pub fn dto_to_packing(dto: &SolutionDto) -> Result<Packing, String> {
    let mode = match dto.mode.as_str() {
        "ras" => Mode::Ras,
        "ras1d" => Mode::RasOneDim,
        "ptas" => Mode::Ptas,
        other => return Err(format!("unknown mode {other:?}")),
    };
    Ok(Packing {
        mode,
        bins: dto.bins.iter().map(dto_to_bin).collect::<Result<Vec<_>, String>>()?,
        total_profit: parse_rat(&dto.profit, "profit")?,
        aug_width: parse_rat(&dto.aug_width, "aug_width")?,
        aug_height: parse_rat(&dto.aug_height, "aug_height")?,
        height_constant: parse_rat(&dto.height_constant, "height_constant")?,
        profit_upper_bound: dto
            .profit_upper_bound
            .as_ref()
            .map(|s| parse_rat(s, "profit_upper_bound"))
            .transpose()?,
        profit_constant: dto
            .profit_constant
            .as_ref()
            .map(|s| parse_rat(s, "profit_constant"))
            .transpose()?,
    })
}
