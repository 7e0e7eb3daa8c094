//! Construction, verification, and exact search for two-partite Turán
//! problems on quadruples.
//!
//! * [`zk`]: matrices over `Z_k`, fair 2x2 submatrices, covering quadruple
//!   systems, and graph Turán numbers.
//! * [`gk`]: the graph `G_k` on functions `Z_k -> Z_k` (edges are pairs with
//!   bijective difference), clique search and triangle counts.
//! * [`exact`]: exact minimum covering systems on tiny instances, counting
//!   lower bounds, and consolidated bounds reports.
//! * [`caen`]: the two-part 4-graph built from a binary matrix, with its
//!   5-set covering check and edge density.

pub mod caen;
pub mod error;
pub mod exact;
pub mod gk;
pub mod io;
pub mod rng;
pub mod zk;

pub use error::{Error, Result};
