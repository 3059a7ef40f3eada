//! Draws every simulation once and summarises the shapes and the dependence
//! each one carries, measured by distance correlation.

use depstat::{list_simulations, simulate, SimulationKind, SimulationSpec, Statistic};

fn main() -> depstat::Result<()> {
    let (n, p) = (200, 2);
    println!("{:<26} {:>8} {:>8} {:>8}", "simulation", "x", "y", "dcorr");
    for (kind, _, _) in list_simulations() {
        let pair = simulate(&SimulationSpec::new(kind, n, p, 1.0, 5))?;
        let dcorr = Statistic::Dcorr.compute(&pair.x, &pair.y)?.value;
        println!(
            "{:<26} {:>8} {:>8} {dcorr:>8.3}",
            kind.name(),
            format!("{}x{}", pair.x.n(), pair.x.p()),
            format!("{}x{}", pair.y.n(), pair.y.p())
        );
    }
    let noiseless = simulate(&SimulationSpec::new(SimulationKind::Linear, 50, 1, 0.0, 1))?;
    println!(
        "\nnoiseless linear, dcorr = {:.6}",
        Statistic::Dcorr.compute(&noiseless.x, &noiseless.y)?.value
    );
    Ok(())
}
