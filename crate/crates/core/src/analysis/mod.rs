//! Equivalence certificates, expansion diagnostics, Hall ratio and cluster
//! profiles.

mod cluster;
mod expansion;
mod fo1;
mod hall;

pub use cluster::{cluster_report, profiles_match, ClusterReport, ClusterReportJson, IndexReport, Profile, RadiusStats, Trend};
pub use expansion::{
    expanding_check, expanding_check_with_limit, h_out, h_out_exact, h_out_local_search, ExpanderParams, ExpanderVerdict,
    HoutMode, HoutResult, DEFAULT_SUBSET_LIMIT,
};
pub use fo1::{fo1local_equiv, Fo1Verdict};
pub use hall::{hall_ratio, independence_number, DEFAULT_NODE_BUDGET};
