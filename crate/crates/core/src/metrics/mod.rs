//! Usage metrics over a frozen graph: activity status, lifespan,
//! popularity and timeliness.
//!
//! All computations are read-only. Batch entry points take an
//! [`Execution`](crate::exec::Execution) strategy; results do not depend
//! on it.

mod activity;
mod lifespan;
mod popularity;
mod timeliness;

pub use activity::{
    activity, library_status, library_statuses, ActivityStatus, ActivityTable, LibraryStatus,
};
pub use lifespan::{lifespan, lifespans, Lifespan};
pub use popularity::{
    library_popularity, version_popularity, PopularityConfig, PopularityError, PopularityMode,
    PopularityOutcome, PopularityScores,
};
pub use timeliness::{
    timeliness, timeliness_all, TimelinessClass, TimelinessContext, TimelinessResult,
    TimelinessVariant,
};
