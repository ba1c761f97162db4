//! File I/O and group-comparison statistics for estimated log-PTRs.

mod io;
mod stats;

pub use io::{
    format_significant, load_coverage_csv, load_grouped_csv, read_coverage, read_estimates,
    read_estimates_csv, read_grouped, write_estimates, write_estimates_csv, CoverageTable,
    EstimateRow,
};
pub use stats::{
    f_survival, f_test_oneway, ln_gamma, regularized_incomplete_beta, t_test_two_sample,
    t_two_sided_p, FTestResult, GroupedValues, TTestResult, TTestVariant,
};
