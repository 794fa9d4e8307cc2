//! JSON and CSV renderings of relation systems, realization tables and identity reports.

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::formal::{RelationSystem, Space};
use crate::identities::IdentityReport;
use crate::kronecker::RealizationTable;
use crate::rational::{format_rational, Rational};

/// A header and string rows, written as CSV.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: impl IntoIterator<Item = impl Into<String>>) -> Self {
        Table { header: header.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: impl IntoIterator<Item = impl Into<String>>) {
        self.rows.push(row.into_iter().map(Into::into).collect());
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let csv_err = |e: csv::Error| Error::InvalidArgument(format!("csv: {e}"));
        w.write_record(&self.header).map_err(csv_err)?;
        for r in &self.rows {
            w.write_record(r).map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::InvalidArgument(format!("csv: {e}")))?;
        Ok(String::from_utf8(bytes).expect("csv of utf-8 strings"))
    }
}

fn dense_rows(sys: &RelationSystem) -> Vec<Vec<String>> {
    let n = sys.basis().len();
    sys.rref()
        .rows()
        .iter()
        .map(|row| {
            let mut dense = vec!["0".to_string(); n];
            for (c, v) in row {
                dense[*c] = format_rational(v);
            }
            dense
        })
        .collect()
}

/// `{space, weight, basis: [...], rows: [[...]]}` with the reduced rows in dense form.
pub fn relation_system_json(sys: &RelationSystem) -> Value {
    json!({
        "space": sys.space(),
        "weight": sys.weight(),
        "rank": sys.rank(),
        "dimension": sys.dimension(),
        "basis": sys.basis().iter().map(ToString::to_string).collect::<Vec<_>>(),
        "rows": dense_rows(sys),
    })
}

pub fn relation_system_table(sys: &RelationSystem) -> Table {
    let mut t = Table::new(sys.basis().iter().map(ToString::to_string));
    for r in dense_rows(sys) {
        t.push(r);
    }
    t
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimensionRow {
    pub space: Space,
    pub weight: u32,
    pub generators: usize,
    pub rank: usize,
    pub dimension: usize,
}

impl DimensionRow {
    pub fn of(sys: &RelationSystem) -> Self {
        DimensionRow {
            space: sys.space(),
            weight: sys.weight(),
            generators: sys.basis().len(),
            rank: sys.rank(),
            dimension: sys.dimension(),
        }
    }
}

pub fn dimension_table(rows: &[DimensionRow]) -> Table {
    let mut t = Table::new(["space", "weight", "generators", "rank", "dimension"]);
    for r in rows {
        t.push([r.space.to_string(), r.weight.to_string(), r.generators.to_string(), r.rank.to_string(), r.dimension.to_string()]);
    }
    t
}

/// `[{gen, value, provenance}, ...]`.
pub fn realization_table_json(t: &RealizationTable) -> Value {
    Value::Array(
        t.values
            .iter()
            .map(|(g, v)| json!({"gen": g.to_string(), "value": v.to_string(), "provenance": t.provenance}))
            .collect(),
    )
}

pub fn realization_table_csv(t: &RealizationTable) -> Table {
    let mut out = Table::new(["gen", "value", "provenance"]);
    for (g, v) in &t.values {
        out.push([g.to_string(), v.to_string(), t.provenance.to_string()]);
    }
    out
}

pub fn identity_reports_json(reports: &[IdentityReport]) -> Value {
    serde_json::to_value(reports).expect("serializable reports")
}

pub fn identity_reports_table(reports: &[IdentityReport]) -> Table {
    let mut t = Table::new(["name", "params", "element", "reduced_to_zero", "realized_zero_to_order"]);
    for r in reports {
        let params = r.params.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
        let elem = r.element.iter().map(|(c, g)| format!("{c}*{g}")).collect::<Vec<_>>().join(" + ");
        let order = r.realized_zero_to_order.map_or_else(String::new, |n| n.to_string());
        t.push([r.name.clone(), params, elem, r.reduced_to_zero.to_string(), order]);
    }
    t
}

pub fn rational_json(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kronecker::Provenance;

    #[test]
    fn relation_system_exports() {
        let sys = RelationSystem::build(Space::Eisenstein, 2).unwrap();
        let j = relation_system_json(&sys);
        assert_eq!(j["basis"], json!(["G(2;0)", "G(1;1)", "G(1,1;0,0)", "P(1,1;0,0)"]));
        assert_eq!(j["rows"].as_array().unwrap().len(), 2);
        let csv = relation_system_table(&sys).to_csv().unwrap();
        assert!(csv.starts_with("G(2;0),G(1;1),\"G(1,1;0,0)\",\"P(1,1;0,0)\"\n"));
    }

    #[test]
    fn realization_exports() {
        let t = RealizationTable::build(2, 3, Provenance::SeriesExtraction).unwrap();
        let j = realization_table_json(&t);
        assert_eq!(j[0]["gen"], "G(2;0)");
        assert_eq!(j[0]["provenance"], "series-extraction");
        assert_eq!(j[0]["value"], "-1/24 + q + 3*q^2 + 4*q^3 + O(q^4)");
        assert_eq!(realization_table_csv(&t).rows.len(), 4);
    }
}
