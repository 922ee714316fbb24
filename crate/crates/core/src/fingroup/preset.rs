//! Named group constructions, loadable from JSON or a short string form.
//!
//! JSON: `{"preset":"cyclic","n":9}`, `{"preset":"unitriangular","p":3,"level":2}`,
//! `{"preset":"table","table":[[0,1],[1,0]]}`.
//! Strings: `cyclic:9`, `abelian:9,9`, `unitriangular:3,2`, `semidirect:7,3,2`,
//! with `*` for direct products (`cyclic:3*symmetric:3`).

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::group::{Elem, FiniteGroup};
use super::GroupError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "preset", rename_all = "lowercase", deny_unknown_fields)]
pub enum GroupPreset {
    Cyclic { n: u64 },
    Abelian { moduli: Vec<u64> },
    Elementary { p: u64, rank: usize },
    Unitriangular { p: u64, level: u32 },
    /// Unitriangular matrices with off-diagonal entries in `pZ/p^{level+1}`.
    Heisenberg { p: u64, level: u32 },
    Symmetric { n: usize },
    Alternating { n: usize },
    Dihedral { n: u64 },
    Semidirect { n: u64, m: u64, r: u64 },
    Table { table: Vec<Vec<Elem>> },
    Product { factors: Vec<GroupPreset> },
}

impl GroupPreset {
    pub fn build(&self) -> Result<FiniteGroup, GroupError> {
        match self {
            GroupPreset::Cyclic { n } => FiniteGroup::cyclic(*n),
            GroupPreset::Abelian { moduli } => FiniteGroup::abelian(moduli),
            GroupPreset::Elementary { p, rank } => FiniteGroup::elementary_abelian(*p, *rank),
            GroupPreset::Unitriangular { p, level } => FiniteGroup::unitriangular(*p, *level),
            GroupPreset::Heisenberg { p, level } => FiniteGroup::heisenberg_congruence(*p, *level),
            GroupPreset::Symmetric { n } => FiniteGroup::symmetric(*n),
            GroupPreset::Alternating { n } => FiniteGroup::alternating(*n),
            GroupPreset::Dihedral { n } => FiniteGroup::semidirect_cyclic(*n, 2, n.saturating_sub(1)),
            GroupPreset::Semidirect { n, m, r } => FiniteGroup::semidirect_cyclic(*n, *m, *r),
            GroupPreset::Table { table } => FiniteGroup::from_table("table", table.clone()),
            GroupPreset::Product { factors } => {
                let mut iter = factors.iter();
                let first = iter.next().ok_or_else(|| GroupError::InvalidPreset("empty product".into()))?;
                iter.try_fold(first.build()?, |acc, f| FiniteGroup::direct_product(&acc, &f.build()?))
            }
        }
    }
}

fn parse_args<T: FromStr>(name: &str, args: &str, count: Option<usize>) -> Result<Vec<T>, GroupError> {
    let vals: Vec<T> = args
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse::<T>())
        .collect::<Result<_, _>>()
        .map_err(|_| GroupError::InvalidPreset(format!("bad arguments for {name}: {args:?}")))?;
    match count {
        Some(c) if vals.len() != c => {
            Err(GroupError::InvalidPreset(format!("{name} takes {c} argument(s), got {}", vals.len())))
        }
        _ => Ok(vals),
    }
}

impl FromStr for GroupPreset {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.starts_with('{') {
            return serde_json::from_str(s).map_err(|e| GroupError::InvalidPreset(e.to_string()));
        }
        if s.contains('*') {
            let factors = s.split('*').map(str::parse).collect::<Result<Vec<_>, _>>()?;
            return Ok(GroupPreset::Product { factors });
        }
        let (name, args) = s.split_once(':').unwrap_or((s, ""));
        let preset = match name {
            "cyclic" => GroupPreset::Cyclic { n: parse_args(name, args, Some(1))?[0] },
            "abelian" => GroupPreset::Abelian { moduli: parse_args(name, args, None)? },
            "elementary" => {
                let a: Vec<u64> = parse_args(name, args, Some(2))?;
                GroupPreset::Elementary { p: a[0], rank: a[1] as usize }
            }
            "unitriangular" | "heisenberg" => {
                let a: Vec<u64> = parse_args(name, args, Some(2))?;
                let level = u32::try_from(a[1]).map_err(|_| GroupError::InvalidPreset("level too large".into()))?;
                if name == "unitriangular" {
                    GroupPreset::Unitriangular { p: a[0], level }
                } else {
                    GroupPreset::Heisenberg { p: a[0], level }
                }
            }
            "symmetric" => GroupPreset::Symmetric { n: parse_args(name, args, Some(1))?[0] },
            "alternating" => GroupPreset::Alternating { n: parse_args(name, args, Some(1))?[0] },
            "dihedral" => GroupPreset::Dihedral { n: parse_args(name, args, Some(1))?[0] },
            "semidirect" => {
                let a: Vec<u64> = parse_args(name, args, Some(3))?;
                GroupPreset::Semidirect { n: a[0], m: a[1], r: a[2] }
            }
            _ => return Err(GroupError::InvalidPreset(format!("unknown preset {name:?}"))),
        };
        Ok(preset)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn string_and_json_forms_agree() {
        let a: GroupPreset = "unitriangular:3,2".parse().unwrap();
        let b: GroupPreset = r#"{"preset":"unitriangular","p":3,"level":2}"#.parse().unwrap();
        assert_eq!(a, b);
        assert_eq!(a.build().unwrap().order(), 729);
        let c: GroupPreset = r#"{"preset":"cyclic","n":9}"#.parse().unwrap();
        assert_eq!(c, GroupPreset::Cyclic { n: 9 });
    }

    #[test]
    fn products_and_tables() {
        let p: GroupPreset = "cyclic:3*symmetric:3".parse().unwrap();
        assert_eq!(p.build().unwrap().order(), 18);
        let t: GroupPreset = r#"{"preset":"table","table":[[0,1],[1,0]]}"#.parse().unwrap();
        assert_eq!(t.build().unwrap().order(), 2);
        assert_eq!("dihedral:5".parse::<GroupPreset>().unwrap().build().unwrap().order(), 10);
    }

    #[test]
    fn rejects_garbage() {
        assert!("cyclic".parse::<GroupPreset>().is_err());
        assert!("frobnicate:3".parse::<GroupPreset>().is_err());
        assert!("cyclic:x".parse::<GroupPreset>().is_err());
        assert!(r#"{"preset":"cyclic","n":9,"extra":1}"#.parse::<GroupPreset>().is_err());
    }
}
