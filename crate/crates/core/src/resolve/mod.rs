//! Minimal free resolutions and Ext charts over a finite subalgebra.
//!
//! Stage `s` is built degree by degree: in each internal degree `t`, new
//! generators cover the part of `ker(F_{s-1} -> F_{s-2})` not already hit by
//! lower generators. Free stages are truncated above `t_max`, and everything
//! in internal degree `<= t_max` is exact, so all reported entries with
//! `t <= t_max` are complete.

mod chart;
mod ext;
mod resolution;

pub use chart::{render_chart, ChartFormat};
pub use ext::{
    chart_of, ext_chart, ext_groups, minimal_resolution, yoneda_action, ExtChart, YonedaAction,
};
pub use resolution::{MinimalResolution, Stage};
