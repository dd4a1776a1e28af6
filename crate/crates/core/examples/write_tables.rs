//! Writes the dense curve tables to CSV and JSON in a temporary directory.

use qspeed::experiments::{alpha_table_rows, run_fig2, run_fig3, CURVE_POINTS};
use qspeed::AlphaTable;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join("qspeed-tables");
    std::fs::create_dir_all(&dir)?;
    let alpha = AlphaTable::shared();
    let tables = [
        ("fig2", run_fig2(CURVE_POINTS, alpha)?),
        ("fig3", run_fig3(CURVE_POINTS, alpha)?),
        ("alpha", alpha_table_rows(alpha)),
    ];
    for (name, t) in &tables {
        let csv = dir.join(format!("{name}.csv"));
        t.write_csv(std::fs::File::create(&csv)?)?;
        std::fs::write(
            dir.join(format!("{name}.json")),
            serde_json::to_string_pretty(&t.to_json())?,
        )?;
        println!("{name}: {} rows -> {}", t.len(), csv.display());
    }
    Ok(())
}
