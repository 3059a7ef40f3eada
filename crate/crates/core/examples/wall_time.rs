//! Wall-time scaling of statistic evaluation, with the fitted log-log slope.
//!
//! ```bash
//! cargo run --release -p depstat --example wall_time
//! ```

use depstat::power::loglog_slope;
use depstat::{wall_time_bench, Statistic};

fn main() -> depstat::Result<()> {
    let grid = [125, 250, 500, 1000];
    for stat in [Statistic::Pearson, Statistic::Kendall, Statistic::Dcorr, Statistic::Hsic, Statistic::Mgc, Statistic::Hhg] {
        let rows = wall_time_bench(&stat, &grid, 3, None, 0)?;
        let times: Vec<String> = rows.iter().map(|r| format!("{:.2e}", r.mean_seconds)).collect();
        println!("{stat:<8} slope {:5.2}  seconds {}", loglog_slope(&rows), times.join(" "));
    }
    Ok(())
}
