//! Diagnostics built on top of the engine: weak-limit fitting, averaging
//! deviations, window-sum statistics, tensor closeness, scans and spectral
//! summaries.

pub mod averaging;
pub mod scans;
pub mod spectral;
pub mod stat_lemma;
pub mod tensor;
pub mod weak_limit;

pub use averaging::{averaging_deviation, DeviationReport};
pub use scans::{
    asymmetry_test, class_alpha, mixing_scan, rigidity_scan, staircase_anomaly, AnomalyReport,
    ClassAlphaReport, MixingScan,
};
pub use spectral::{spectral_density, wiener_average};
pub use stat_lemma::{stat_lemma_mc, statistical_d, StatLemmaSample};
pub use tensor::{slow_growth_powers, tensor_closeness, TensorCloseness};
pub use weak_limit::{weak_limit_fit, LimitFit};
