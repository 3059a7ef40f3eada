//! Evaluates all eleven statistics on one simulated dataset and reports how
//! long each evaluation takes.
//!
//! ```bash
//! cargo run --release -p depstat --example statistics_tour -- spiral 100
//! ```

use std::time::Instant;

use depstat::{simulate, SimulationKind, SimulationSpec, Statistic};

fn main() -> depstat::Result<()> {
    let mut args = std::env::args().skip(1);
    let kind: SimulationKind = args.next().as_deref().unwrap_or("spiral").parse()?;
    let n: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(100);

    let pair = simulate(&SimulationSpec::new(kind, n, 1, 1.0, 42))?;
    println!("{kind}, n = {n}, p = 1");
    println!("{:<10} {:>14} {:>12}", "statistic", "value", "micros");
    for stat in Statistic::ALL {
        let start = Instant::now();
        let value = stat.compute(&pair.x, &pair.y)?;
        let micros = start.elapsed().as_secs_f64() * 1e6;
        match value.scale {
            Some((k, l)) => println!("{stat:<10} {:>14.6} {micros:>12.1}  scale ({k}, {l})", value.value),
            None => println!("{stat:<10} {:>14.6} {micros:>12.1}", value.value),
        }
    }
    Ok(())
}
