//! The critical hamburger-cheeseburger inventory model.
//!
//! Words over `{h, c, H, C, F}` encode loop-decorated triangulations, and the
//! random walks read off them describe the loops of critical FK(4) planar
//! maps. The crate has five parts:
//!
//! * [`word`] and [`trajectory`]: sampling, reduction, matching, burger counts
//!   and discrepancy, with a lazily revealed past;
//! * [`bijection`]: words to triangulations and back;
//! * [`exploration`]: the step decomposition of the past, reduced walks and
//!   future blocks;
//! * [`analytics`]: quadrature for the partition function and the Laplace
//!   transforms tied to it;
//! * [`oracle`]: exact enumeration on small words.
//!
//! ```
//! use hcburger::word::{reduce, word};
//!
//! let r = reduce(&word("hcHFcH"));
//! assert_eq!(r.to_string(), "Hc");
//! ```

pub mod analytics;
pub mod backward;
pub mod bijection;
pub mod exploration;
pub mod oracle;
pub mod quad;
pub mod rng;
pub mod stats;
pub mod trajectory;
pub mod word;

pub use word::{Burger, Letter, Word, WeightTable};
