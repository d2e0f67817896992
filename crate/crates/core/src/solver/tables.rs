//! Invariant tables and the embedded reference data.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::rational::{serde_str, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TableKind {
    GwY,
    GvY,
    Ambiguity,
    GwOrb,
    GwCon,
}

impl TableKind {
    pub const ALL: [TableKind; 5] =
        [TableKind::GwY, TableKind::GvY, TableKind::Ambiguity, TableKind::GwOrb, TableKind::GwCon];

    pub fn label(self) -> &'static str {
        match self {
            TableKind::GwY => "gw_y",
            TableKind::GvY => "gv_y",
            TableKind::Ambiguity => "ambiguity",
            TableKind::GwOrb => "gw_orb",
            TableKind::GwCon => "gw_con",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            TableKind::GwY => "Gromov-Witten invariants of local P2",
            TableKind::GvY => "Gopakumar-Vafa invariants of local P2",
            TableKind::Ambiguity => "Holomorphic ambiguity coefficients",
            TableKind::GwOrb => "Orbifold Gromov-Witten invariants",
            TableKind::GwCon => "Conifold invariants",
        }
    }

    /// Name of the column index: degree, insertions or ambiguity power.
    pub fn index_name(self) -> &'static str {
        match self {
            TableKind::GwY | TableKind::GvY | TableKind::GwCon => "degree",
            TableKind::GwOrb => "insertions",
            TableKind::Ambiguity => "power",
        }
    }
}

impl fmt::Display for TableKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for TableKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        TableKind::ALL.into_iter().find(|k| k.label() == s).ok_or_else(|| format!("unknown table {s:?}"))
    }
}

/// `(genus, index) → value`.
pub type Table = BTreeMap<(u32, i64), Rational>;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InvariantTables {
    pub gw_y: Table,
    pub gv_y: Table,
    /// `(g, i) → c_i` of `Σ c_i (1+27y)^(−i)`.
    pub ambiguity: Table,
    pub gw_orb: Table,
    pub gw_con: Table,
}

impl InvariantTables {
    pub fn get(&self, kind: TableKind) -> &Table {
        match kind {
            TableKind::GwY => &self.gw_y,
            TableKind::GvY => &self.gv_y,
            TableKind::Ambiguity => &self.ambiguity,
            TableKind::GwOrb => &self.gw_orb,
            TableKind::GwCon => &self.gw_con,
        }
    }

    pub fn get_mut(&mut self, kind: TableKind) -> &mut Table {
        match kind {
            TableKind::GwY => &mut self.gw_y,
            TableKind::GvY => &mut self.gv_y,
            TableKind::Ambiguity => &mut self.ambiguity,
            TableKind::GwOrb => &mut self.gw_orb,
            TableKind::GwCon => &mut self.gw_con,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReferenceEntry {
    pub genus: u32,
    pub index: i64,
    #[serde(with = "serde_str")]
    pub value: Rational,
    /// Gopakumar–Vafa entry used as a genus input.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub input: bool,
    /// Entry whose printed value was a known misprint and is given corrected.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub corrected: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReferenceTables {
    pub gw_y: Vec<ReferenceEntry>,
    pub gv_y: Vec<ReferenceEntry>,
    pub ambiguity: Vec<ReferenceEntry>,
    pub gw_orb: Vec<ReferenceEntry>,
    pub gw_con: Vec<ReferenceEntry>,
}

impl ReferenceTables {
    pub fn entries(&self, kind: TableKind) -> &[ReferenceEntry] {
        match kind {
            TableKind::GwY => &self.gw_y,
            TableKind::GvY => &self.gv_y,
            TableKind::Ambiguity => &self.ambiguity,
            TableKind::GwOrb => &self.gw_orb,
            TableKind::GwCon => &self.gw_con,
        }
    }

    pub fn table(&self, kind: TableKind) -> Table {
        self.entries(kind).iter().map(|e| ((e.genus, e.index), e.value.clone())).collect()
    }

    pub fn tables(&self) -> InvariantTables {
        InvariantTables {
            gw_y: self.table(TableKind::GwY),
            gv_y: self.table(TableKind::GvY),
            ambiguity: self.table(TableKind::Ambiguity),
            gw_orb: self.table(TableKind::GwOrb),
            gw_con: self.table(TableKind::GwCon),
        }
    }

    /// Gopakumar–Vafa inputs of genus `g` at degrees `1..=2g−2`.
    pub fn gv_inputs(&self, g: u32) -> BTreeMap<u32, Rational> {
        self.gv_y
            .iter()
            .filter(|e| e.input && e.genus == g)
            .map(|e| (e.index as u32, e.value.clone()))
            .collect()
    }
}

const REFERENCE_JSON: &str = include_str!("../../data/reference_tables.json");

/// Published tables for genus ≤ 7, degree ≤ 15, insertions ≤ 27.
pub fn reference() -> &'static ReferenceTables {
    static CELL: OnceLock<ReferenceTables> = OnceLock::new();
    CELL.get_or_init(|| serde_json::from_str(REFERENCE_JSON).expect("embedded reference tables parse"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, q};

    #[test]
    fn embedded_tables_load() {
        let r = reference();
        assert_eq!(r.gw_y.len(), 120);
        assert_eq!(r.gv_y.len(), 120);
        assert_eq!(r.gw_orb.len(), 72);
        let t = r.tables();
        assert_eq!(t.gw_y[&(0, 1)], int(3));
        assert_eq!(t.gv_y[&(3, 7)], int(-15363990));
        assert_eq!(t.gw_orb[&(0, 3)], q(1, 3));
        assert_eq!(r.gv_inputs(3).len(), 4);
        assert_eq!(r.gv_inputs(7).len(), 12);
        assert_eq!(r.gw_orb.iter().filter(|e| e.corrected).count(), 5);
    }
}
