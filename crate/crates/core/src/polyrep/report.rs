use std::io::{self, Write};

use serde::Serialize;

use super::{CombinationResult, Operator, Order};
use crate::text::PrepLevel;

pub const TABLE_HEADER: &str = "level\toperator\trep_a\trep_b\torder\tprobability\tbest";

/// One row of the polyrepresentation table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableRow {
    pub level: String,
    pub operator: String,
    pub rep_a: String,
    pub rep_b: String,
    pub order: String,
    pub probability: f64,
    /// Highest probability in its column (level × consensus / A⊗B / B⊗A).
    pub best: bool,
}

type Column = (PrepLevel, Operator, Option<Order>);

fn column(result: &CombinationResult) -> Column {
    let spec = &result.spec;
    let order = match spec.operator {
        Operator::Consensus => None,
        Operator::Recommendation => Some(spec.order),
    };
    (spec.level, spec.operator, order)
}

/// Rows in input order, with the per-column maxima flagged.
pub fn table_rows(results: &[CombinationResult]) -> Vec<TableRow> {
    let mut maxima: Vec<(Column, f64)> = Vec::new();
    for r in results {
        let col = column(r);
        match maxima.iter_mut().find(|(c, _)| *c == col) {
            Some((_, max)) => *max = max.max(r.aggregate_probability),
            None => maxima.push((col, r.aggregate_probability)),
        }
    }
    results
        .iter()
        .map(|r| {
            let col = column(r);
            let max = maxima.iter().find(|(c, _)| *c == col).map(|(_, m)| *m);
            TableRow {
                level: r.spec.level.to_string(),
                operator: r.spec.operator.to_string(),
                rep_a: r.spec.rep_a.to_string(),
                rep_b: r.spec.rep_b.to_string(),
                order: r.spec.order_label().to_string(),
                probability: r.aggregate_probability,
                best: max == Some(r.aggregate_probability),
            }
        })
        .collect()
}

/// Writes the table as TSV, probabilities to four decimals.
pub fn write_table_tsv<W: Write>(rows: &[TableRow], mut out: W) -> io::Result<()> {
    writeln!(out, "{TABLE_HEADER}")?;
    for row in rows {
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{:.4}\t{}",
            row.level,
            row.operator,
            row.rep_a,
            row.rep_b,
            row.order,
            row.probability,
            if row.best { "*" } else { "" }
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyrep::{run_matrix, MatrixConfig, Topic};

    #[test]
    fn one_best_per_column_at_least() {
        let topic = Topic {
            id: "t".into(),
            information_need: "quark gluon plasma".into(),
            background: "heavy ion physics".into(),
            work_task: "write a review of quark matter".into(),
            ideal_answer: "papers on plasma".into(),
            keywords: "quark plasma".into(),
        };
        let config = MatrixConfig {
            levels: vec![PrepLevel::CasePunct],
            ..MatrixConfig::default()
        };
        let rows = table_rows(&run_matrix(&[topic], &config).unwrap());
        assert_eq!(rows.len(), 18);
        for (op, order) in [
            ("consensus", "-"),
            ("recommendation", "AB"),
            ("recommendation", "BA"),
        ] {
            let col: Vec<_> = rows
                .iter()
                .filter(|r| r.operator == op && r.order == order)
                .collect();
            assert_eq!(col.len(), 6);
            assert!(col.iter().any(|r| r.best));
            let max = col.iter().map(|r| r.probability).fold(f64::MIN, f64::max);
            assert!(col.iter().filter(|r| r.best).all(|r| r.probability == max));
        }

        let mut buf = Vec::new();
        write_table_tsv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next().unwrap(), TABLE_HEADER);
        assert_eq!(text.lines().count(), 19);
        assert!(text.lines().skip(1).all(|l| l.split('\t').count() == 7));
    }
}
