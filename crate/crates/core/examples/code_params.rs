// Parameters of the k×k torus code, its logical operators, and how
// errors are classified.
//
// ```bash
// cargo run --example code_params
// ```

use anyon_lab::toric::{shortest_nontrivial_cycle, ErrorClass, PauliOperator, StringKind, TorusCode};

pub fn run_example() -> anyhow::Result<()> {
    println!("{:>3} {:>5} {:>5} {:>4} {:>9}", "k", "n", "m", "dim", "distance");
    for k in 2..=7 {
        let code = TorusCode::new(k)?;
        let p = code.parameters();
        let d = shortest_nontrivial_cycle(&code, StringKind::Z);
        println!("{k:>3} {:>5} {:>5} {:>4} {d:>9}", p.n, p.independent_checks, p.logical_dim());
    }

    let code = TorusCode::new(4)?;
    let n = code.num_qubits();
    let [z1, _, x1, _] = code.logicals();
    println!("\nk = 4 logical Z1 = {z1}");
    println!("k = 4 logical X1 = {x1}");
    println!("Z1 and X1 anticommute: {}", !z1.commutes_with(&x1)?);

    // a single flip is detectable, a full loop is logical, a star is harmless
    let cases = [
        ("one X", PauliOperator::x_on(n, [0])),
        ("star", code.star_operator(5)),
        ("Z loop", PauliOperator::z_on(n, code.z_loop(0))),
    ];
    for (name, op) in cases {
        let class = code.classify(&op)?;
        let text = match class {
            ErrorClass::Detectable => "detectable".to_string(),
            ErrorClass::Stabilizer => "stabilizer (no effect)".to_string(),
            ErrorClass::Logical(h) => format!("logical, winding {h:?}"),
        };
        println!("{name:>8}: {text}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run_example()
}
