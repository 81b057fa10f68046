// Character tables of small groups and the particle types `(C, χ)` of
// their quantum doubles.
//
// ```bash
// cargo run --example double_irreps
// ```

use anyon_lab::double::double_irreps;
use anyon_lab::group::FiniteGroup;

pub fn run_example() -> anyhow::Result<()> {
    for name in ["S3", "D4", "S4"] {
        let g = FiniteGroup::builtin(name)?;
        let table = g.character_table()?;
        println!("{name}: order {}, {} classes", g.order(), table.classes.len());
        for (row, values) in table.irreps.iter().enumerate() {
            let cells: Vec<String> = values.iter().map(|c| format!("{:>5.2}", (c.re * 100.0).round() / 100.0 + 0.0)).collect();
            println!("  chi{row} (dim {}): {}", table.dims[row], cells.join(" "));
        }

        let labels = double_irreps(&g)?;
        println!("  D({name}) has {} irreps:", labels.len());
        for l in &labels {
            println!(
                "    flux {:<12} centralizer order {:>2}  chi{}  dim {}",
                g.format_element(l.magnetic_class.representative),
                l.centralizer_order,
                l.electric_row,
                l.dim
            );
        }
        let total: usize = labels.iter().map(|l| l.dim * l.dim).sum();
        assert_eq!(total, g.order() * g.order());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run_example()
}
