//! Interpolates two pairs of formulas over shared arrays and reports the loop iterations.

use maxdiff::frontend::{parse_interpolation, print_formula};
use maxdiff::interpolate::{ard_interpolate, InterpolationConfig, InterpolationOutcome};
use maxdiff::kernel::TermStore;

const PAIRS: &[(&str, &str)] = &[
    (include_str!("../fixtures/write_a.ard"), include_str!("../fixtures/two_reads_b.ard")),
    (include_str!("../fixtures/four_atoms_a.ard"), include_str!("../fixtures/gap_b.ard")),
];

fn main() -> maxdiff::Result<()> {
    for (a, b) in PAIRS {
        let mut store = TermStore::new();
        let p = parse_interpolation(&mut store, a, b)?;
        let out = ard_interpolate(&mut store, &p.a.formula(), &p.b.formula(), InterpolationConfig::default())?;
        match out {
            InterpolationOutcome::Interpolant(th) => {
                println!("iterations: {}", th.iterations);
                let methods: Vec<String> = th.methods.iter().map(ToString::to_string).collect();
                println!("leaves: {}", methods.join(" "));
                println!("{}\n", print_formula(&mut store, &th.formula, true));
            }
            InterpolationOutcome::Sat(_) => println!("sat\n"),
            InterpolationOutcome::Unknown { reached } => println!("unknown at level {reached}\n"),
        }
    }
    Ok(())
}
