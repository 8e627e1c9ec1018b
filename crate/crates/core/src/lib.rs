//! Hypervolume of a stable point set by partitioning the dominated region
//! into disjoint axis-parallel boxes, one per local upper bound.
//!
//! All computations work in a minimization frame where every point lies in
//! the open box `(0, r)`; [`frame::canonicalize`] maps other inputs there.
//!
//! ```
//! use hvbox::{hbda_ni, StableSet};
//!
//! let set = StableSet::new(
//!     vec![vec![1.0, 5.0], vec![2.0, 3.0], vec![4.0, 2.0], vec![6.0, 1.0]],
//!     vec![7.0, 7.0],
//! )
//! .unwrap();
//! assert_eq!(hbda_ni(&set).unwrap().volume, 26.0);
//! ```

pub mod decomp;
pub mod dominance;
pub mod error;
pub mod frame;
pub mod instances;
pub mod lub;
pub mod oracle;
pub mod rng;
pub mod spatial;
pub mod sum;
pub mod wfg;

pub use decomp::{hbda_i, hbda_ni, IncrementalHypervolume, PartitionBox};
pub use error::{Error, Result};
pub use frame::{canonicalize, Direction, ReferenceFrame, StableSet};
pub use oracle::{volume_grid_sweep, volume_inclusion_exclusion, OracleBudget};
pub use wfg::{wfg_basic, wfg_incremental, wfg_sliced};
