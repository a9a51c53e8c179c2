use serde::Deserialize;
use thiserror::Error;

use crate::methods::{MethodKind, UnknownMethod};
use crate::precision::PrecisionContext;
use crate::scalar::HpReal;

/// The bundled reference table, one row per (table, method) cell.
pub const REFERENCE_CSV: &str = include_str!("../../data/reference_tables.csv");

#[derive(Debug, Error)]
pub enum ReferenceError {
    #[error("reference data: {0}")]
    Csv(#[from] csv::Error),
    #[error("reference data: {0}")]
    Method(#[from] UnknownMethod),
    #[error("reference data: not a decimal number: {0:?}")]
    BadNumber(String),
}

#[derive(Debug, Deserialize)]
struct Row {
    table: u8,
    function: String,
    x0: String,
    method: String,
    paper_value: String,
}

/// A published `|f(x_3)|` value.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceCell {
    pub table: u8,
    pub method: MethodKind,
    pub function: String,
    /// Initial guess as decimal text.
    pub x0: String,
    /// The published value, verbatim (e.g. `0.47200e-25`).
    pub paper_value: String,
}

impl ReferenceCell {
    pub fn x0(&self, ctx: &PrecisionContext) -> HpReal {
        ctx.parse_decimal(&self.x0).expect("validated on load")
    }

    pub fn paper_value(&self, ctx: &PrecisionContext) -> HpReal {
        ctx.parse_decimal(&self.paper_value)
            .expect("validated on load")
    }
}

/// Parses reference cells from CSV text with the header
/// `table,function,x0,method,paper_value`.
pub fn parse_reference_csv(text: &str) -> Result<Vec<ReferenceCell>, ReferenceError> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let probe = PrecisionContext::new(64).expect("64 bits is valid");
    let mut cells = Vec::new();
    for row in reader.deserialize::<Row>() {
        let row = row?;
        for number in [&row.x0, &row.paper_value] {
            if probe.parse_decimal(number).is_none() {
                return Err(ReferenceError::BadNumber(number.clone()));
            }
        }
        cells.push(ReferenceCell {
            table: row.table,
            method: row.method.parse()?,
            function: row.function,
            x0: row.x0,
            paper_value: row.paper_value,
        });
    }
    Ok(cells)
}

/// All 49 bundled cells, ordered by table then method.
pub fn reference_cells() -> Vec<ReferenceCell> {
    parse_reference_csv(REFERENCE_CSV).expect("bundled reference data is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::builtin;

    #[test]
    fn bundled_table_has_all_cells() {
        let cells = reference_cells();
        assert_eq!(cells.len(), 49);
        for table in 2..=8u8 {
            let rows: Vec<_> = cells.iter().filter(|c| c.table == table).collect();
            assert_eq!(rows.len(), 7);
            let methods: Vec<_> = rows.iter().map(|c| c.method.name()).collect();
            assert_eq!(
                methods,
                [
                    "steffensen",
                    "jain",
                    "dehghan1",
                    "dehghan2",
                    "dehghan3",
                    "cordero",
                    "mkdf"
                ]
            );
            // one function per table, with the matching initial guess
            let f = builtin(&rows[0].function).unwrap();
            assert!(rows.iter().all(|c| c.function == rows[0].function));
            assert!(rows
                .iter()
                .all(|c| Some(c.x0.as_str()) == f.default_x0_text()));
        }
    }

    #[test]
    fn spot_check_published_values() {
        let cells = reference_cells();
        let find = |t: u8, m: &str| {
            cells
                .iter()
                .find(|c| c.table == t && c.method.name() == m)
                .unwrap()
                .paper_value
                .clone()
        };
        assert_eq!(find(2, "mkdf"), "0.47200e-25");
        assert_eq!(find(4, "mkdf"), "0.10720e-64");
        assert_eq!(find(6, "dehghan1"), "0.43288e+0");
        assert_eq!(find(7, "steffensen"), "0.77299e+1");
        assert_eq!(find(8, "cordero"), "0.43626e-79");
    }

    #[test]
    fn malformed_rows_are_rejected() {
        let bad = "table,function,x0,method,paper_value\n2,f1,1,newton,0.1e-3\n";
        assert!(matches!(
            parse_reference_csv(bad),
            Err(ReferenceError::Method(_))
        ));
        let bad = "table,function,x0,method,paper_value\n2,f1,1,mkdf,abc\n";
        assert!(matches!(
            parse_reference_csv(bad),
            Err(ReferenceError::BadNumber(_))
        ));
    }
}
