use primerel::tables::{
    check_relation1, check_relation2, check_relation3, relation1_columns, repairs, ColumnCheck,
    RepairGrid,
};
use serde_json::json;

use super::check_certificate;
use crate::output::Printer;
use crate::Failure;

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Show only the columns of the first table that reproduce, under an errata banner.
    #[arg(long)]
    pub paper_faithful: bool,
}

fn emit(p: &mut Printer, table: usize, check: &ColumnCheck) -> Result<(), Failure> {
    let status = if check.reproduced() { "reproduced" } else { "erratum" };
    p.row(
        format!(
            "table {table} column {}: printed {}, computed {}  {status}",
            check.column, check.printed, check.certificate.value
        ),
        json!({
            "table": table,
            "column": check.column,
            "printed": check.printed,
            "computed": check.certificate.value.to_string(),
            "status": status,
            "params": check.certificate.params,
        }),
    )?;
    check_certificate(&check.certificate)
}

pub fn run(args: &Args, p: &mut Printer) -> Result<(), Failure> {
    let first = check_relation1()?;
    let errata: Vec<&ColumnCheck> = first.iter().filter(|c| !c.reproduced()).collect();
    if !errata.is_empty() {
        let cols: Vec<String> = errata.iter().map(|c| c.column.to_string()).collect();
        p.text(format!(
            "ERRATA: table 1 columns {} print values their parameters do not produce",
            cols.join(", ")
        ))?;
    }
    for check in &first {
        if args.paper_faithful && !check.reproduced() {
            continue;
        }
        emit(p, 1, check)?;
    }
    for check in &check_relation2()? {
        emit(p, 2, check)?;
    }
    for check in &check_relation3()? {
        emit(p, 3, check)?;
    }

    let columns = relation1_columns();
    let mut found = Vec::new();
    for check in errata {
        let printed = &columns[check.column - 1];
        let fixes = repairs(printed, RepairGrid::default())?;
        let Some(best) = fixes.first() else {
            p.text(format!("  column {}: no tuple in the search grid reaches {}", check.column, printed.printed))?;
            continue;
        };
        let nearest: Vec<_> = fixes.iter().take_while(|r| r.distance == best.distance).collect();
        for r in &nearest {
            p.text(format!(
                "  column {} reaches {} with b1={} b2={} K={} m={:?} ({} field{} changed)",
                check.column,
                printed.printed,
                r.column.b1,
                r.column.b2,
                r.column.k,
                r.column.exponents,
                r.distance,
                if r.distance == 1 { "" } else { "s" }
            ))?;
        }
        found.push(json!({
            "column": check.column,
            "printed": printed.printed,
            "computed": check.certificate.value.to_string(),
            "nearest": nearest.iter().map(|r| json!({
                "b1": r.column.b1,
                "b2": r.column.b2,
                "k": r.column.k,
                "m": r.column.exponents,
                "distance": r.distance,
            })).collect::<Vec<_>>(),
        }));
    }
    p.extra("errata", json!(found));
    Ok(())
}
