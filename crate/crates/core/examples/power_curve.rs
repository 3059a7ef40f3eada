//! Monte Carlo power of several statistics against sample size.
//!
//! ```bash
//! cargo run --release -p depstat --example power_curve -- spiral
//! ```

use depstat::{estimate_power, PowerAxis, PowerConfig, SimulationKind, Statistic};

fn main() -> depstat::Result<()> {
    let kind: SimulationKind = std::env::args().nth(1).as_deref().unwrap_or("quadratic").parse()?;
    let mut config = PowerConfig::new(kind, PowerAxis::SampleSize, vec![10, 20, 40, 80]);
    config.replicates = 100;
    config.n_permutations = 99;
    config.seed = 17;

    println!("{kind}: power at alpha {} ({} replicates)", config.alpha, config.replicates);
    print!("{:<9}", "n");
    for n in &config.grid {
        print!("{n:>7}");
    }
    println!();
    for stat in [Statistic::Pearson, Statistic::Dcorr, Statistic::Hsic, Statistic::Mgc, Statistic::Hhg] {
        let curve = estimate_power(&stat, &config)?;
        print!("{stat:<9}");
        for p in &curve.power {
            print!("{p:>7.2}");
        }
        println!();
    }
    Ok(())
}
