//! Simulated experiments: seeded sampling, offset estimation, numeric Fisher
//! information, the synchronization criterion, and error-scaling studies.

mod estimate;
mod fisher;
mod judge;
mod sampling;
mod study;

pub use estimate::{estimate_offset, EstimateReport, SingletInverter, MONOTONE_GRID};
pub use fisher::{fisher_information_numeric, FisherNumeric, MIN_CLASS_PROBABILITY};
pub use judge::{
    chernoff_confidence, chernoff_coverage, criterion_met, criterion_threshold, judge_mean, judge_synchronization,
    CoverageReport, JudgementReport,
};
pub use sampling::{
    mean_parity, sample_records, sample_records_stream, substream, ExperimentRng, MeasurementRecord, Sampler,
};
pub use study::{
    log_log_slope, rmse_study, rmse_study_streams, scaling_study, RmseReport, ScalingReport, ScalingRow, MIN_TRIALS,
};
