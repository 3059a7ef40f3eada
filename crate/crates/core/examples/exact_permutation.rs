//! Exhaustive versus Monte Carlo permutation p-values on a tiny sample.

use depstat::{exact_permutation_test, permutation_test, DataMatrix, Statistic};

fn main() -> depstat::Result<()> {
    let x = DataMatrix::from_column(&[0.3, 1.1, 1.9, 3.2, 4.0, 5.1])?;
    let y = DataMatrix::from_column(&[0.1, 0.9, 2.6, 2.2, 4.4, 4.9])?;
    for stat in [Statistic::Pearson, Statistic::Kendall, Statistic::Dcorr, Statistic::Hhg] {
        let exact = exact_permutation_test(&stat, &x, &y)?;
        let approx = permutation_test(&stat, &x, &y, 9999, 8)?;
        println!(
            "{stat:<8} exact p {:.4} over {} orderings, randomized p {:.4}",
            exact.p_value, exact.n_permutations, approx.p_value
        );
    }
    Ok(())
}
