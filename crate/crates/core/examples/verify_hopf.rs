// Builds the structure tensors of the quantum double of S3 and checks
// every Hopf algebra and R-matrix axiom on all index tuples.
//
// ```bash
// cargo run --example verify_hopf
// ```

use anyon_lab::double::{DoubleIndex, DoubleTensors, VerifyMode};
use anyon_lab::group::FiniteGroup;

pub fn run_example() -> anyhow::Result<()> {
    let g = FiniteGroup::builtin("S3")?;
    let t = DoubleTensors::build(&g);
    let n = g.order();
    println!("D(S3): {} basis elements, Omega has {} nonzero entries", t.dim(), t.omega.nnz());

    // D_(h,g) D_(h',g') = δ_{h, g h' g⁻¹} D_(h, g g')
    let (a, b) = (g.parse_element("(1 2)")?, g.parse_element("(1 2 3)")?);
    let k1 = DoubleIndex::new(a, b).flat(n);
    let k2 = DoubleIndex::new(g.conj(g.inv(b), a), b).flat(n);
    for (k, c) in t.omega.iter().filter(|(ix, _)| ix[1] == k1 && ix[2] == k2) {
        let l = t.label(k[0]);
        println!(
            "D_({}, {}) D_({}, {}) = {c} D_({}, {})",
            g.format_element(a),
            g.format_element(b),
            g.format_element(g.conj(g.inv(b), a)),
            g.format_element(b),
            g.format_element(l.h),
            g.format_element(l.g)
        );
    }

    let reports = t.verify_axioms(VerifyMode::Exhaustive);
    for r in &reports {
        println!("{:<28} {} residual {:.1e}", r.id, if r.passed { "ok  " } else { "FAIL" }, r.residual);
    }
    let failed = reports.iter().filter(|r| !r.passed).count();
    anyhow::ensure!(failed == 0, "{failed} axioms failed");
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run_example()
}
